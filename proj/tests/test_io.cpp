#include "wrg/io.hpp"

#include "wrg/rng.hpp"

#include <doctest.h>

using namespace wrg;

TEST_CASE("fnv1a64 digests match the reference constants") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(digest_hex("") == "fnv1a64:cbf29ce484222325");
    CHECK(digest_hex("abc") != digest_hex("abd"));
}

TEST_CASE("snapshot files round-trip exactly") {
    Rng rng(13);
    for (const int dim : {1, 2}) {
        const Domain dom = dim == 1 ? Domain::line(7.7) : Domain::rectangle(7.7, 3.1);
        std::vector<Snapshot> snaps;
        for (int k = 0; k < 4; ++k) {
            Snapshot s;
            s.time = rng.uniform(0.0, 10.0);
            s.config = poisson_configuration(dom, 0.8, 0.6, rng);
            snaps.push_back(std::move(s));
        }
        const std::string text = format_snapshots(snaps, dom);
        const SnapshotFile parsed = parse_snapshots(text);
        CHECK(parsed.domain == dom);
        REQUIRE(parsed.snapshots.size() == snaps.size());
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            CHECK(parsed.snapshots[k].time == snaps[k].time);
            CHECK(parsed.snapshots[k].config == snaps[k].config);
        }
        // Byte-stable: formatting the parse reproduces the text.
        CHECK(format_snapshots(parsed.snapshots, parsed.domain) == text);
    }
}

TEST_CASE("snapshot parsing rejects malformed input") {
    CHECK_THROWS_AS(parse_snapshots("not a header\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snapshots("wrg-snapshots 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snapshots("wrg-snapshots 1\ndomain 1 10\n+ 0.5\n"),
                    std::invalid_argument);
    // Record header counts must match the points that follow.
    CHECK_THROWS_AS(parse_snapshots("wrg-snapshots 1\ndomain 1 10\nsnapshot 1 2 0\n+ 0.5\n"),
                    std::invalid_argument);
}

TEST_CASE("event files round-trip") {
    const Domain dom = Domain::line(9.0);
    std::vector<EventRecord> events;
    Rng rng(29);
    const EventKind kinds[] = {EventKind::birth_plus,  EventKind::birth_minus,
                               EventKind::death_plus,  EventKind::death_minus,
                               EventKind::mutation_plus_minus, EventKind::mutation_minus_plus,
                               EventKind::rejected};
    int np = 0, nm = 0;
    for (int i = 0; i < 40; ++i) {
        EventRecord e;
        e.time = 0.3 * i + rng.uniform01();
        e.kind = kinds[rng.uniform_index(7)];
        e.position = Vec(rng.uniform01() * 9.0, 0.0);
        e.n_plus_after = np = std::max(0, np + static_cast<int>(rng.uniform_index(3)) - 1);
        e.n_minus_after = nm = std::max(0, nm + static_cast<int>(rng.uniform_index(3)) - 1);
        events.push_back(e);
    }
    const std::string text = format_events(events, dom);
    const EventFile parsed = parse_events(text);
    REQUIRE(parsed.events.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(parsed.events[i].time == events[i].time);
        CHECK(parsed.events[i].kind == events[i].kind);
        CHECK(parsed.events[i].position[0] == events[i].position[0]);
        CHECK(parsed.events[i].n_plus_after == events[i].n_plus_after);
        CHECK(parsed.events[i].n_minus_after == events[i].n_minus_after);
    }
}

TEST_CASE("record files round-trip") {
    const std::vector<std::pair<std::string, std::string>> records = {
        {"alpha", "0.5"}, {"verdict", "FAIL"}, {"note", "a = b = c"}};
    const auto parsed = parse_records(format_records(records));
    CHECK(parsed == records);
}

TEST_CASE("manifest files round-trip") {
    Manifest m;
    m.code_version = "9.9.9";
    m.format_version = 1;
    m.created = "2026-01-01T00:00:00Z";
    m.seed = 123456789012345ULL;
    m.files.push_back({"data.csv", "fnv1a64:0123456789abcdef", 420});
    m.files.push_back({"snapshots_000.txt", "fnv1a64:fedcba9876543210", 7});
    m.config_text = "kind = check\ndomain.dimension = 1\n";

    const Manifest parsed = parse_manifest(format_manifest(m));
    CHECK(parsed.code_version == m.code_version);
    CHECK(parsed.created == m.created);
    CHECK(parsed.seed == m.seed);
    REQUIRE(parsed.files.size() == 2);
    CHECK(parsed.files[0].name == "data.csv");
    CHECK(parsed.files[0].digest == m.files[0].digest);
    CHECK(parsed.files[0].bytes == 420);
    CHECK(parsed.config_text == m.config_text);
}

TEST_CASE("file io writes and reads back") {
    const std::filesystem::path path = std::filesystem::temp_directory_path() / "wrg_io_test.txt";
    write_file(path, "line one\nline two\n");
    CHECK(read_file(path) == "line one\nline two\n");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_file(path), std::runtime_error);
}
