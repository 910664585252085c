#pragma once

#include "wrg/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wrg {

std::uint64_t fnv1a64(std::string_view bytes);

/// Digest string of the form "fnv1a64:<16 hex digits>".
std::string digest_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// ---------------------------------------------------------------------------
// Versioned text formats. Numbers are written in shortest round-trip decimal
// form, so parsing reproduces the exact doubles.

std::string format_snapshots(std::span<const Snapshot> snapshots, const Domain& dom);

struct SnapshotFile {
    Domain domain;
    std::vector<Snapshot> snapshots;
};

SnapshotFile parse_snapshots(const std::string& text);

std::string format_events(std::span<const EventRecord> events, const Domain& dom);

struct EventFile {
    Domain domain;
    std::vector<EventRecord> events;
};

EventFile parse_events(const std::string& text);

// ---------------------------------------------------------------------------
// Flat "key = value" record files (reports).

std::string format_records(const std::vector<std::pair<std::string, std::string>>& records);
std::vector<std::pair<std::string, std::string>> parse_records(const std::string& text);

// ---------------------------------------------------------------------------
// Experiment manifest: resolved config echo, seeds, and the produced-file
// inventory with content digests. Timestamps live only here, never in data
// files, so re-runs are byte-identical where it matters.

struct ManifestEntry {
    std::string name;
    std::string digest;
    std::uint64_t bytes = 0;
};

struct Manifest {
    std::string code_version;
    int format_version = 0;
    std::string created;
    std::uint64_t seed = 0;
    std::vector<ManifestEntry> files;
    std::string config_text;
};

std::string format_manifest(const Manifest& m);
Manifest parse_manifest(const std::string& text);

}  // namespace wrg
