#include "brux/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "brux/errors.hpp"

namespace brux {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& detail) {
    raise(Errc::BadConfig, "line " + std::to_string(line_no) + ": " + detail);
}

double parse_double_value(const std::string& text, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        bad_line(line_no, "'" + text + "' is not a number");
    }
    return v;
}

long long parse_int_value(const std::string& text, std::size_t line_no) {
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size()) {
        bad_line(line_no, "'" + text + "' is not an integer");
    }
    return v;
}

bool parse_bool_value(const std::string& text, std::size_t line_no) {
    if (text == "true") return true;
    if (text == "false") return false;
    bad_line(line_no, "'" + text + "' is not true|false");
}

Interval parse_interval_value(const std::string& text, std::size_t line_no) {
    std::istringstream ss(text);
    std::string lo, hi, extra;
    if (!(ss >> lo >> hi) || (ss >> extra)) {
        bad_line(line_no, "'" + text + "' is not an interval (two numbers)");
    }
    Interval interval{parse_double_value(lo, line_no), parse_double_value(hi, line_no)};
    if (!(interval.lo <= interval.hi)) bad_line(line_no, "interval bounds out of order");
    return interval;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') bad_line(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "radar" && section != "scenario" &&
                section != "pipeline" && section != "features" && section != "forest" &&
                section != "eval") {
                bad_line(line_no, "unknown section [" + section + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) bad_line(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) bad_line(line_no, "empty key");
        if (value.empty()) bad_line(line_no, "empty value for '" + key + "'");
        if (section.empty()) bad_line(line_no, "'" + key + "' appears before any [section]");

        const std::string path = section + "." + key;
        if (path == "run.seed") {
            config.seed = static_cast<std::uint64_t>(parse_int_value(value, line_no));
        } else if (path == "radar.carrier_freq_hz") {
            config.radar.carrier_freq_hz = parse_double_value(value, line_no);
        } else if (path == "radar.bandwidth_hz") {
            config.radar.bandwidth_hz = parse_double_value(value, line_no);
        } else if (path == "radar.samples_per_chirp") {
            config.radar.samples_per_chirp = static_cast<int>(parse_int_value(value, line_no));
        } else if (path == "radar.slow_time_rate_hz") {
            config.radar.slow_time_rate_hz = parse_double_value(value, line_no);
        } else if (path == "radar.duration_s") {
            config.radar.duration_s = parse_double_value(value, line_no);
        } else if (path == "radar.target_range_m") {
            config.radar.target_range_m = parse_double_value(value, line_no);
        } else if (path == "radar.snr_db") {
            config.radar.snr_db = parse_double_value(value, line_no);
        } else if (path == "radar.target_amplitude") {
            config.radar.target_amplitude = parse_double_value(value, line_no);
        } else if (path == "radar.clutter_range_m") {
            config.radar.clutter_range_m = parse_double_value(value, line_no);
        } else if (path == "radar.clutter_amplitude") {
            config.radar.clutter_amplitude = parse_double_value(value, line_no);
        } else if (path == "radar.dc_leakage_amplitude") {
            config.radar.dc_leakage_amplitude = parse_double_value(value, line_no);
        } else if (path == "scenario.mandible_freq_hz") {
            config.scenario.mandible_freq_hz = parse_interval_value(value, line_no);
        } else if (path == "scenario.mandible_amp_m") {
            config.scenario.mandible_amp_m = parse_interval_value(value, line_no);
        } else if (path == "scenario.mandible_jitter") {
            config.scenario.mandible_jitter = parse_interval_value(value, line_no);
        } else if (path == "scenario.masseter_freq_hz") {
            config.scenario.masseter_freq_hz = parse_interval_value(value, line_no);
        } else if (path == "scenario.masseter_amp_m") {
            config.scenario.masseter_amp_m = parse_interval_value(value, line_no);
        } else if (path == "scenario.respiration_freq_hz") {
            config.scenario.respiration_freq_hz = parse_interval_value(value, line_no);
        } else if (path == "scenario.respiration_amp_m") {
            config.scenario.respiration_amp_m = parse_interval_value(value, line_no);
        } else if (path == "scenario.tremor_amp_m") {
            config.scenario.tremor_amp_m = parse_interval_value(value, line_no);
        } else if (path == "pipeline.r_min_m") {
            config.pipeline.r_min_m = parse_double_value(value, line_no);
        } else if (path == "pipeline.r_max_m") {
            config.pipeline.r_max_m = parse_double_value(value, line_no);
        } else if (path == "pipeline.hann_window") {
            config.pipeline.hann_window = parse_bool_value(value, line_no);
        } else if (path == "pipeline.remove_static_clutter") {
            config.pipeline.remove_static_clutter = parse_bool_value(value, line_no);
        } else if (path == "features.histogram_bins") {
            config.features.histogram_bins = static_cast<int>(parse_int_value(value, line_no));
        } else if (path == "features.diff_threshold_rad") {
            config.features.diff_threshold_rad = parse_double_value(value, line_no);
        } else if (path == "forest.n_estimators") {
            config.forest.n_estimators = static_cast<int>(parse_int_value(value, line_no));
        } else if (path == "forest.min_samples_split") {
            config.forest.min_samples_split = static_cast<int>(parse_int_value(value, line_no));
        } else if (path == "forest.max_features") {
            if (value == "sqrt") {
                config.forest.max_features_rule = MaxFeaturesRule::Sqrt;
                config.forest.max_features_k = 0;
            } else if (value == "all") {
                config.forest.max_features_rule = MaxFeaturesRule::All;
                config.forest.max_features_k = 0;
            } else {
                config.forest.max_features_rule = MaxFeaturesRule::Fixed;
                config.forest.max_features_k = static_cast<int>(parse_int_value(value, line_no));
            }
        } else if (path == "forest.max_depth") {
            config.forest.max_depth =
                value == "none" ? -1 : static_cast<int>(parse_int_value(value, line_no));
        } else if (path == "eval.folds") {
            config.eval_folds = static_cast<int>(parse_int_value(value, line_no));
        } else {
            bad_line(line_no, "unknown key '" + key + "' in section [" + section + "]");
        }
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_run_config(buffer.str());
    } catch (const Error& e) {
        if (e.code() == Errc::BadConfig) {
            raise(Errc::BadConfig, path + ": " + e.what());
        }
        throw;
    }
}

std::string run_config_text(const RunConfig& c) {
    std::ostringstream out;
    auto interval = [](const Interval& i) {
        return format_double(i.lo) + " " + format_double(i.hi);
    };

    out << "[run]\n";
    out << "seed = " << c.seed << "\n";
    out << "\n[radar]\n";
    out << "carrier_freq_hz = " << format_double(c.radar.carrier_freq_hz) << "\n";
    out << "bandwidth_hz = " << format_double(c.radar.bandwidth_hz) << "\n";
    out << "samples_per_chirp = " << c.radar.samples_per_chirp << "\n";
    out << "slow_time_rate_hz = " << format_double(c.radar.slow_time_rate_hz) << "\n";
    out << "duration_s = " << format_double(c.radar.duration_s) << "\n";
    out << "target_range_m = " << format_double(c.radar.target_range_m) << "\n";
    out << "snr_db = " << format_double(c.radar.snr_db) << "\n";
    out << "target_amplitude = " << format_double(c.radar.target_amplitude) << "\n";
    out << "clutter_range_m = " << format_double(c.radar.clutter_range_m) << "\n";
    out << "clutter_amplitude = " << format_double(c.radar.clutter_amplitude) << "\n";
    out << "dc_leakage_amplitude = " << format_double(c.radar.dc_leakage_amplitude) << "\n";
    out << "\n[scenario]\n";
    out << "mandible_freq_hz = " << interval(c.scenario.mandible_freq_hz) << "\n";
    out << "mandible_amp_m = " << interval(c.scenario.mandible_amp_m) << "\n";
    out << "mandible_jitter = " << interval(c.scenario.mandible_jitter) << "\n";
    out << "masseter_freq_hz = " << interval(c.scenario.masseter_freq_hz) << "\n";
    out << "masseter_amp_m = " << interval(c.scenario.masseter_amp_m) << "\n";
    out << "respiration_freq_hz = " << interval(c.scenario.respiration_freq_hz) << "\n";
    out << "respiration_amp_m = " << interval(c.scenario.respiration_amp_m) << "\n";
    out << "tremor_amp_m = " << interval(c.scenario.tremor_amp_m) << "\n";
    out << "\n[pipeline]\n";
    out << "r_min_m = " << format_double(c.pipeline.r_min_m) << "\n";
    out << "r_max_m = " << format_double(c.pipeline.r_max_m) << "\n";
    out << "hann_window = " << (c.pipeline.hann_window ? "true" : "false") << "\n";
    out << "remove_static_clutter = " << (c.pipeline.remove_static_clutter ? "true" : "false")
        << "\n";
    out << "\n[features]\n";
    out << "histogram_bins = " << c.features.histogram_bins << "\n";
    out << "diff_threshold_rad = " << format_double(c.features.diff_threshold_rad) << "\n";
    out << "\n[forest]\n";
    out << "n_estimators = " << c.forest.n_estimators << "\n";
    out << "min_samples_split = " << c.forest.min_samples_split << "\n";
    out << "max_features = ";
    switch (c.forest.max_features_rule) {
        case MaxFeaturesRule::Sqrt: out << "sqrt"; break;
        case MaxFeaturesRule::All: out << "all"; break;
        case MaxFeaturesRule::Fixed: out << c.forest.max_features_k; break;
    }
    out << "\n";
    if (c.forest.max_depth < 0) {
        out << "max_depth = none\n";
    } else {
        out << "max_depth = " << c.forest.max_depth << "\n";
    }
    out << "\n[eval]\n";
    out << "folds = " << c.eval_folds << "\n";
    return out.str();
}

void save_run_config(const std::string& path, const RunConfig& config) {
    std::ofstream out(path);
    if (!out) raise(Errc::IoError, "cannot open '" + path + "' for writing");
    out << run_config_text(config);
    if (!out) raise(Errc::IoError, "failed writing '" + path + "'");
}

}  // namespace brux
