#pragma once

#include <string>
#include <vector>

#include "brux/iq.hpp"
#include "brux/sim.hpp"
#include "brux/types.hpp"

namespace brux {

// One recording of a dataset: where its raw capture lives (relative to the
// manifest file) and how to decode it.
struct ManifestEntry {
    std::string id;
    std::string file;
    Label label = Label::NoGrinding;
    RawCaptureLayout layout;
    double slow_time_rate_hz = 0.0;

    bool operator==(const ManifestEntry&) const = default;
};

// Dataset sidecar: the radar settings the captures were produced with plus
// one entry per recording. Serialized as versioned JSON with sorted keys, so
// identical datasets serialize to identical bytes.
struct DatasetManifest {
    RadarConfig radar;
    std::vector<ManifestEntry> entries;

    bool operator==(const DatasetManifest&) const = default;
};

void save_manifest(const std::string& path, const DatasetManifest& manifest);

// Parses and validates: schema tag and version, unique non-empty ids, known
// labels, positive layout dimensions, and that every referenced capture file
// exists next to the manifest. Structural problems raise SchemaMismatch;
// missing capture files raise IoError.
DatasetManifest load_manifest(const std::string& path);

// Absolute path of an entry's capture file, resolved against the manifest.
std::string resolve_manifest_file(const std::string& manifest_path, const ManifestEntry& entry);

}  // namespace brux
