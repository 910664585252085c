#include "wrg/io.hpp"

#include "wrg/text.hpp"
#include "wrg/version.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wrg {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest_hex(std::string_view bytes) {
    static const char* hex = "0123456789abcdef";
    const std::uint64_t h = fnv1a64(bytes);
    std::string out = "fnv1a64:";
    for (int shift = 60; shift >= 0; shift -= 4) out += hex[(h >> shift) & 0xF];
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::string format_domain_line(const Domain& dom) {
    std::string line = "domain " + std::to_string(dom.dimension) + ' ' + format_double(dom.side[0]);
    if (dom.dimension == 2) line += ' ' + format_double(dom.side[1]);
    return line;
}

Domain parse_domain_line(std::string_view line) {
    const auto parts = split(std::string_view(trim(line)), ' ');
    if (parts.size() < 3 || trim(parts[0]) != "domain")
        throw std::invalid_argument("expected 'domain <dim> <sides...>'");
    const int dim = static_cast<int>(parse_double(parts[1]));
    Vec side = Vec::Zero();
    if (static_cast<int>(parts.size()) != 2 + dim)
        throw std::invalid_argument("domain line: side count does not match dimension");
    for (int i = 0; i < dim; ++i) side[i] = parse_double(parts[2 + i]);
    return Domain::make(dim, side);
}

std::string format_position(const Vec& x, int dimension) {
    std::string out = format_double(x[0]);
    if (dimension == 2) out += ' ' + format_double(x[1]);
    return out;
}

}  // namespace

std::string format_snapshots(std::span<const Snapshot> snapshots, const Domain& dom) {
    std::string out = "wrg-snapshots " + std::to_string(kFormatVersion) + "\n";
    out += format_domain_line(dom) + "\n";
    for (const Snapshot& s : snapshots) {
        out += "snapshot " + format_double(s.time) + ' ' + std::to_string(s.config.plus.size()) +
               ' ' + std::to_string(s.config.minus.size()) + "\n";
        for (const Vec& x : s.config.plus) out += "+ " + format_position(x, dom.dimension) + "\n";
        for (const Vec& x : s.config.minus) out += "- " + format_position(x, dom.dimension) + "\n";
    }
    return out;
}

SnapshotFile parse_snapshots(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "wrg-snapshots " + std::to_string(kFormatVersion))
        throw std::invalid_argument("snapshots: bad or missing header");
    if (!std::getline(in, line)) throw std::invalid_argument("snapshots: missing domain line");
    SnapshotFile file;
    file.domain = parse_domain_line(line);

    auto read_point = [&](std::string_view rest) {
        const auto parts = split(std::string_view(trim(rest)), ' ');
        if (static_cast<int>(parts.size()) != file.domain.dimension)
            throw std::invalid_argument("snapshots: point does not match dimension");
        Vec x = Vec::Zero();
        for (int i = 0; i < file.domain.dimension; ++i) x[i] = parse_double(parts[i]);
        return x;
    };

    std::size_t want_plus = 0, want_minus = 0;
    auto check_counts = [&]() {
        if (file.snapshots.empty()) return;
        const auto& cfg = file.snapshots.back().config;
        if (cfg.plus.size() != want_plus || cfg.minus.size() != want_minus)
            throw std::invalid_argument("snapshots: point count does not match the record header");
    };

    while (std::getline(in, line)) {
        const std::string_view t = trim(line);
        if (t.empty()) continue;
        if (t.starts_with("snapshot ")) {
            check_counts();
            const auto parts = split(t, ' ');
            if (parts.size() != 4) throw std::invalid_argument("snapshots: bad snapshot line");
            Snapshot s;
            s.time = parse_double(parts[1]);
            want_plus = static_cast<std::size_t>(parse_double(parts[2]));
            want_minus = static_cast<std::size_t>(parse_double(parts[3]));
            file.snapshots.push_back(std::move(s));
            file.snapshots.back().config.plus.reserve(want_plus);
            file.snapshots.back().config.minus.reserve(want_minus);
        } else if (t.starts_with("+ ") || t.starts_with("- ")) {
            if (file.snapshots.empty())
                throw std::invalid_argument("snapshots: point before first snapshot");
            auto& cfg = file.snapshots.back().config;
            (t[0] == '+' ? cfg.plus : cfg.minus).push_back(read_point(t.substr(2)));
        } else {
            throw std::invalid_argument("snapshots: unrecognized line '" + std::string(t) + "'");
        }
    }
    check_counts();
    return file;
}

std::string format_events(std::span<const EventRecord> events, const Domain& dom) {
    std::string out = "wrg-events " + std::to_string(kFormatVersion) + "\n";
    out += format_domain_line(dom) + "\n";
    for (const EventRecord& e : events) {
        out += format_double(e.time);
        out += ' ';
        out += event_kind_name(e.kind);
        out += ' ';
        out += format_position(e.position, dom.dimension);
        out += ' ' + std::to_string(e.n_plus_after) + ' ' + std::to_string(e.n_minus_after) + "\n";
    }
    return out;
}

EventFile parse_events(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "wrg-events " + std::to_string(kFormatVersion))
        throw std::invalid_argument("events: bad or missing header");
    if (!std::getline(in, line)) throw std::invalid_argument("events: missing domain line");
    EventFile file;
    file.domain = parse_domain_line(line);
    const int dim = file.domain.dimension;
    while (std::getline(in, line)) {
        const std::string_view t = trim(line);
        if (t.empty()) continue;
        const auto parts = split(t, ' ');
        if (static_cast<int>(parts.size()) != 4 + dim)
            throw std::invalid_argument("events: bad record '" + std::string(t) + "'");
        EventRecord e;
        e.time = parse_double(parts[0]);
        const auto kind = parse_event_kind(std::string(parts[1]));
        if (!kind) throw std::invalid_argument("events: unknown kind '" + std::string(parts[1]) + "'");
        e.kind = *kind;
        for (int i = 0; i < dim; ++i) e.position[i] = parse_double(parts[2 + i]);
        e.n_plus_after = static_cast<int>(parse_double(parts[2 + dim]));
        e.n_minus_after = static_cast<int>(parse_double(parts[3 + dim]));
        file.events.push_back(e);
    }
    return file;
}

std::string format_records(const std::vector<std::pair<std::string, std::string>>& records) {
    std::string out;
    for (const auto& [k, v] : records) out += k + " = " + v + "\n";
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_records(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("records: expected 'key = value', got '" + std::string(t) + "'");
        out.emplace_back(std::string(trim(t.substr(0, eq))), std::string(trim(t.substr(eq + 1))));
    }
    return out;
}

std::string format_manifest(const Manifest& m) {
    std::string out = "wrg-manifest " + std::to_string(kFormatVersion) + "\n";
    out += "code_version = " + m.code_version + "\n";
    out += "created = " + m.created + "\n";
    out += "seed = " + std::to_string(m.seed) + "\n";
    for (const ManifestEntry& f : m.files)
        out += "file = " + f.digest + ' ' + std::to_string(f.bytes) + ' ' + f.name + "\n";
    out += "config-begin\n";
    out += m.config_text;
    if (!m.config_text.empty() && m.config_text.back() != '\n') out += '\n';
    out += "config-end\n";
    return out;
}

Manifest parse_manifest(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "wrg-manifest " + std::to_string(kFormatVersion))
        throw std::invalid_argument("manifest: bad or missing header");
    Manifest m;
    m.format_version = kFormatVersion;
    bool in_config = false;
    while (std::getline(in, line)) {
        if (in_config) {
            if (trim(line) == "config-end") {
                in_config = false;
                continue;
            }
            m.config_text += line + "\n";
            continue;
        }
        const std::string_view t = trim(line);
        if (t.empty()) continue;
        if (t == "config-begin") {
            in_config = true;
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("manifest: bad line '" + std::string(t) + "'");
        const std::string key{trim(t.substr(0, eq))};
        const std::string value{trim(t.substr(eq + 1))};
        if (key == "code_version") {
            m.code_version = value;
        } else if (key == "created") {
            m.created = value;
        } else if (key == "seed") {
            m.seed = std::stoull(value);
        } else if (key == "file") {
            const auto parts = split(value, ' ');
            if (parts.size() < 3) throw std::invalid_argument("manifest: bad file entry");
            ManifestEntry e;
            e.digest = std::string(parts[0]);
            e.bytes = static_cast<std::uint64_t>(parse_double(parts[1]));
            e.name = std::string(parts[2]);
            m.files.push_back(std::move(e));
        } else {
            throw std::invalid_argument("manifest: unknown key '" + key + "'");
        }
    }
    return m;
}

}  // namespace wrg
