// Copyright 2026 The Voxid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "voxid/config.hpp"

#include <charconv>
#include <fstream>
#include <optional>

#include "voxid/errors.hpp"

namespace voxid {

void ExtractionConfig::validate() const {
    mfcc.validate();
    if (hop_ms <= 0.0 || frame_ms < hop_ms)
        throw BadConfig("need 0 < hop_ms <= frame_ms");
}

namespace {

double parse_number(const std::string& key, const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw BadConfig("config key " + key + " has unparseable value '" +
                        text + "'");
    return value;
}

}  // namespace

ExtractionConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open config file: " + path);

    ExtractionConfig cfg;
    std::optional<double> f_high;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const std::size_t end = line.find_last_not_of(" \t\r");
        line = line.substr(begin, end - begin + 1);

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw BadConfig(path + ":" + std::to_string(line_no) +
                            ": expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        const double num = parse_number(key, value);

        if (key == "sample_rate")
            cfg.mfcc.sample_rate = int(num);
        else if (key == "fft_size")
            cfg.mfcc.fft_size = std::size_t(num);
        else if (key == "num_filters")
            cfg.mfcc.num_filters = int(num);
        else if (key == "f_low")
            cfg.mfcc.f_low = num;
        else if (key == "f_high")
            f_high = num;
        else if (key == "num_coeffs")
            cfg.mfcc.num_coeffs = int(num);
        else if (key == "log_floor")
            cfg.mfcc.log_floor = num;
        else if (key == "frame_ms")
            cfg.frame_ms = num;
        else if (key == "hop_ms")
            cfg.hop_ms = num;
        else
            throw BadConfig(path + ":" + std::to_string(line_no) +
                            ": unknown config key '" + key + "'");
    }
    cfg.mfcc.f_high = f_high ? *f_high : cfg.mfcc.sample_rate / 2.0;
    cfg.validate();
    return cfg;
}

}  // namespace voxid
