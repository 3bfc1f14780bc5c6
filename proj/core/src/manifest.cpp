#include "brux/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "brux/errors.hpp"

namespace brux {

namespace {

using nlohmann::json;

constexpr const char* kSchemaTag = "bruxradar-dataset";
constexpr int kSchemaVersion = 1;

json radar_to_json(const RadarConfig& r) {
    return json{{"carrier_freq_hz", r.carrier_freq_hz},
                {"bandwidth_hz", r.bandwidth_hz},
                {"samples_per_chirp", r.samples_per_chirp},
                {"slow_time_rate_hz", r.slow_time_rate_hz},
                {"duration_s", r.duration_s},
                {"target_range_m", r.target_range_m},
                {"snr_db", r.snr_db},
                {"target_amplitude", r.target_amplitude},
                {"clutter_range_m", r.clutter_range_m},
                {"clutter_amplitude", r.clutter_amplitude},
                {"dc_leakage_amplitude", r.dc_leakage_amplitude}};
}

RadarConfig radar_from_json(const json& j) {
    RadarConfig r;
    r.carrier_freq_hz = j.at("carrier_freq_hz").get<double>();
    r.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    r.samples_per_chirp = j.at("samples_per_chirp").get<int>();
    r.slow_time_rate_hz = j.at("slow_time_rate_hz").get<double>();
    r.duration_s = j.at("duration_s").get<double>();
    r.target_range_m = j.at("target_range_m").get<double>();
    r.snr_db = j.at("snr_db").get<double>();
    r.target_amplitude = j.at("target_amplitude").get<double>();
    r.clutter_range_m = j.at("clutter_range_m").get<double>();
    r.clutter_amplitude = j.at("clutter_amplitude").get<double>();
    r.dc_leakage_amplitude = j.at("dc_leakage_amplitude").get<double>();
    return r;
}

}  // namespace

void save_manifest(const std::string& path, const DatasetManifest& manifest) {
    json entries = json::array();
    for (const ManifestEntry& e : manifest.entries) {
        entries.push_back(json{{"id", e.id},
                               {"file", e.file},
                               {"label", to_string(e.label)},
                               {"num_chirps", e.layout.num_chirps},
                               {"samples_per_chirp", e.layout.samples_per_chirp},
                               {"num_channels", e.layout.num_channels},
                               {"selected_channel", e.layout.selected_channel},
                               {"slow_time_rate_hz", e.slow_time_rate_hz}});
    }
    const json doc{{"schema", kSchemaTag},
                   {"version", kSchemaVersion},
                   {"radar", radar_to_json(manifest.radar)},
                   {"entries", entries}};

    std::ofstream out(path);
    if (!out) raise(Errc::IoError, "cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) raise(Errc::IoError, "failed writing '" + path + "'");
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::IoError, "cannot open '" + path + "'");

    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        raise(Errc::SchemaMismatch, path + ": " + e.what());
    }

    DatasetManifest manifest;
    try {
        if (doc.at("schema").get<std::string>() != kSchemaTag) {
            raise(Errc::SchemaMismatch, path + ": not a dataset manifest");
        }
        if (doc.at("version").get<int>() != kSchemaVersion) {
            raise(Errc::SchemaMismatch,
                  path + ": unsupported manifest version " + doc.at("version").dump());
        }
        manifest.radar = radar_from_json(doc.at("radar"));

        std::set<std::string> seen_ids;
        for (const json& j : doc.at("entries")) {
            ManifestEntry e;
            e.id = j.at("id").get<std::string>();
            e.file = j.at("file").get<std::string>();
            e.label = parse_label(j.at("label").get<std::string>());
            e.layout.num_chirps = j.at("num_chirps").get<int>();
            e.layout.samples_per_chirp = j.at("samples_per_chirp").get<int>();
            e.layout.num_channels = j.at("num_channels").get<int>();
            e.layout.selected_channel = j.at("selected_channel").get<int>();
            e.slow_time_rate_hz = j.at("slow_time_rate_hz").get<double>();

            if (e.id.empty() || !seen_ids.insert(e.id).second) {
                raise(Errc::SchemaMismatch, path + ": empty or duplicate id '" + e.id + "'");
            }
            if (e.layout.num_chirps < 1 || e.layout.samples_per_chirp < 1 ||
                e.layout.num_channels < 1 || e.layout.selected_channel < 0 ||
                e.layout.selected_channel >= e.layout.num_channels) {
                raise(Errc::SchemaMismatch, path + ": entry '" + e.id + "' has an invalid layout");
            }
            if (!(e.slow_time_rate_hz > 0)) {
                raise(Errc::SchemaMismatch,
                      path + ": entry '" + e.id + "' has a non-positive slow-time rate");
            }
            manifest.entries.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        raise(Errc::SchemaMismatch, path + ": " + e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::BadConfig) raise(Errc::SchemaMismatch, path + ": " + e.what());
        throw;
    }

    for (const ManifestEntry& e : manifest.entries) {
        const std::string file = resolve_manifest_file(path, e);
        if (!std::filesystem::exists(file)) {
            raise(Errc::IoError, "capture file '" + file + "' referenced by '" + e.id +
                                     "' does not exist");
        }
    }
    return manifest;
}

std::string resolve_manifest_file(const std::string& manifest_path, const ManifestEntry& entry) {
    const std::filesystem::path file(entry.file);
    if (file.is_absolute()) return file.string();
    return (std::filesystem::path(manifest_path).parent_path() / file).string();
}

}  // namespace brux
