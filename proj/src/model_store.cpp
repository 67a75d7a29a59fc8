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

#include "voxid/model_store.hpp"

#include <charconv>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <sstream>
#include <vector>

#include "voxid/errors.hpp"

namespace voxid::store {

namespace {

constexpr std::string_view kMagic = "VOXID-MODEL";
constexpr std::string_view kHeader = "VOXID-MODEL v1";

[[noreturn]] void malformed(const std::string& path, std::size_t line_no,
                            const std::string& what) {
    throw MalformedModel(path + ":" + std::to_string(line_no) + ": " + what);
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

/// Reads lines and tracks the current number for diagnostics.
class LineReader {
public:
    LineReader(std::istream& in, std::string path)
        : in_(in), path_(std::move(path)) {}

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no_;
        return true;
    }

    std::string require(const std::string& what) {
        std::string line;
        if (!next(line)) malformed(path_, line_no_ + 1, "unexpected end of file, expected " + what);
        return line;
    }

    std::size_t line_no() const { return line_no_; }
    const std::string& path() const { return path_; }

private:
    std::istream& in_;
    std::string path_;
    std::size_t line_no_ = 0;
};

/// key=value fields of one line; `name` is taken verbatim to end of line so
/// it may contain spaces.
class Fields {
public:
    Fields(LineReader& reader, std::string line, std::string_view keyword)
        : reader_(reader), line_(std::move(line)) {
        const auto tokens = split_ws(line_);
        if (tokens.empty() || tokens.front() != keyword)
            malformed(reader.path(), reader.line_no(),
                      "expected a '" + std::string(keyword) + "' line");
        const std::size_t name_at = line_.find(" name=");
        std::string_view head =
            name_at == std::string::npos ? std::string_view(line_)
                                         : std::string_view(line_).substr(0, name_at);
        for (std::string_view tok : split_ws(head)) {
            if (tok == keyword) continue;
            const std::size_t eq = tok.find('=');
            if (eq == std::string_view::npos)
                malformed(reader.path(), reader.line_no(),
                          "expected key=value, got '" + std::string(tok) + "'");
            kv_.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
        if (name_at != std::string::npos)
            kv_.emplace_back("name", std::string_view(line_).substr(name_at + 6));
    }

    std::string_view get(std::string_view key) const {
        for (const auto& [k, v] : kv_)
            if (k == key) return v;
        malformed(reader_.path(), reader_.line_no(),
                  "missing field '" + std::string(key) + "'");
    }

    double real(std::string_view key) const {
        const std::string_view v = get(key);
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size())
            malformed(reader_.path(), reader_.line_no(),
                      "field '" + std::string(key) + "' is not a number: '" +
                          std::string(v) + "'");
        return out;
    }

    long long integer(std::string_view key) const {
        const std::string_view v = get(key);
        long long out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size())
            malformed(reader_.path(), reader_.line_no(),
                      "field '" + std::string(key) + "' is not an integer: '" +
                          std::string(v) + "'");
        return out;
    }

private:
    LineReader& reader_;
    std::string line_;
    std::vector<std::pair<std::string_view, std::string_view>> kv_;
};

std::vector<double> parse_reals(LineReader& reader,
                                const std::vector<std::string_view>& tokens,
                                std::size_t from, std::size_t expect) {
    if (tokens.size() - from != expect)
        malformed(reader.path(), reader.line_no(),
                  "expected " + std::to_string(expect) + " values, got " +
                      std::to_string(tokens.size() - from));
    std::vector<double> out(expect);
    for (std::size_t i = 0; i < expect; ++i) {
        const std::string_view t = tokens[from + i];
        const auto [ptr, ec] =
            std::from_chars(t.data(), t.data() + t.size(), out[i]);
        if (ec != std::errc() || ptr != t.data() + t.size())
            malformed(reader.path(), reader.line_no(),
                      "value " + std::to_string(i) + " is not a number: '" +
                          std::string(t) + "'");
    }
    return out;
}

std::string kernel_to_line(const svm::KernelSpec& k) {
    switch (k.kind) {
        case svm::KernelKind::linear:
            return "kernel kind=linear";
        case svm::KernelKind::rbf:
            return "kernel kind=rbf gamma=" + format_real(k.gamma);
        case svm::KernelKind::polynomial:
            return "kernel kind=polynomial degree=" + std::to_string(k.degree) +
                   " coef0=" + format_real(k.coef0);
    }
    throw ConsistencyError("unknown kernel kind");
}

void append_reals(std::string& line, std::span<const double> values) {
    for (double v : values) {
        line += ' ';
        line += format_real(v);
    }
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

double parse_real(std::string_view text) {
    double out = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw MalformedCsv("not a number: '" + std::string(text) + "'");
    return out;
}

std::string now_utc_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void save_model(const StoredModel& stored, const std::string& path) {
    const svm::MulticlassModel& mc = stored.model;
    if (mc.speaker_ids.size() != mc.models.size())
        throw ConsistencyError("speaker list and model list differ in length");
    if (mc.speaker_ids.size() < 2)
        throw ConsistencyError("a model needs at least 2 speakers");
    for (int id : mc.speaker_ids) {
        const auto it = stored.registry.entries.find(id);
        if (it == stored.registry.entries.end() || it->second.name.empty())
            throw ConsistencyError("speaker " + std::to_string(id) +
                                   " is modeled but has no named registry entry");
    }

    std::ostringstream out;
    out << kHeader << '\n';
    const mfcc::MfccConfig& m = stored.extraction.mfcc;
    out << "mfcc sample_rate=" << m.sample_rate << " fft_size=" << m.fft_size
        << " num_filters=" << m.num_filters << " f_low=" << format_real(m.f_low)
        << " f_high=" << format_real(m.f_high) << " num_coeffs=" << m.num_coeffs
        << " log_floor=" << format_real(m.log_floor)
        << " frame_ms=" << format_real(stored.extraction.frame_ms)
        << " hop_ms=" << format_real(stored.extraction.hop_ms) << '\n';
    out << kernel_to_line(mc.models.empty() ? svm::KernelSpec{}
                                            : mc.models.front().kernel)
        << '\n';

    out << "scaler dim=" << mc.scaler.mean.size() << '\n';
    std::string line = "scaler-mean";
    append_reals(line, mc.scaler.mean);
    out << line << '\n';
    line = "scaler-std";
    append_reals(line, mc.scaler.std_dev);
    out << line << '\n';

    out << "speakers count=" << mc.speaker_ids.size() << '\n';
    for (int id : mc.speaker_ids) {
        const SpeakerInfo& info = stored.registry.entries.at(id);
        out << "speaker id=" << id << " utterances=" << info.utterance_count
            << " enrolled_at=" << info.enrolled_at << " name=" << info.name
            << '\n';
    }

    for (std::size_t k = 0; k < mc.models.size(); ++k) {
        const svm::SvmModel& model = mc.models[k];
        out << "model speaker=" << mc.speaker_ids[k]
            << " bias=" << format_real(model.bias)
            << " sv_count=" << model.support_vectors.size()
            << " solver=" << model.solver_name << " C=" << format_real(model.C)
            << " iterations=" << model.iterations
            << " wall_seconds=" << format_real(model.train_seconds)
            << " truncated=" << (model.truncated ? 1 : 0)
            << " dual_objective=" << format_real(model.dual_objective) << '\n';
        for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
            line = "sv " + format_real(model.coeffs[s]);
            append_reals(line, model.support_vectors[s]);
            out << line << '\n';
        }
    }
    out << "end\n";

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoFailure("cannot open for writing: " + path);
    file << out.str();
    if (!file) throw IoFailure("write failed: " + path);
}

StoredModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open model file: " + path);
    LineReader reader(in, path);

    std::string line = reader.require("header");
    if (line != kHeader) {
        if (line.rfind(kMagic, 0) == 0)
            throw UnknownVersion("unrecognized model format version: '" + line +
                                 "'");
        malformed(path, reader.line_no(), "not a model file (bad header)");
    }

    StoredModel stored;

    {
        const Fields f(reader, reader.require("mfcc line"), "mfcc");
        mfcc::MfccConfig& m = stored.extraction.mfcc;
        m.sample_rate = int(f.integer("sample_rate"));
        m.fft_size = std::size_t(f.integer("fft_size"));
        m.num_filters = int(f.integer("num_filters"));
        m.f_low = f.real("f_low");
        m.f_high = f.real("f_high");
        m.num_coeffs = int(f.integer("num_coeffs"));
        m.log_floor = f.real("log_floor");
        stored.extraction.frame_ms = f.real("frame_ms");
        stored.extraction.hop_ms = f.real("hop_ms");
        try {
            stored.extraction.validate();
        } catch (const Error& e) {
            malformed(path, reader.line_no(), e.what());
        }
    }

    svm::KernelSpec kernel;
    {
        const Fields f(reader, reader.require("kernel line"), "kernel");
        const std::string_view kind = f.get("kind");
        if (kind == "linear") {
            kernel = svm::KernelSpec::linear();
        } else if (kind == "rbf") {
            kernel = svm::KernelSpec::rbf(f.real("gamma"));
        } else if (kind == "polynomial") {
            kernel = svm::KernelSpec::polynomial(int(f.integer("degree")),
                                                 f.real("coef0"));
        } else {
            malformed(path, reader.line_no(),
                      "unknown kernel kind '" + std::string(kind) + "'");
        }
        try {
            kernel.validate();
        } catch (const Error& e) {
            malformed(path, reader.line_no(), e.what());
        }
    }

    std::size_t dim = 0;
    {
        const Fields f(reader, reader.require("scaler line"), "scaler");
        const long long d = f.integer("dim");
        if (d < 1) malformed(path, reader.line_no(), "scaler dim must be >= 1");
        dim = std::size_t(d);

        line = reader.require("scaler-mean line");
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens.front() != "scaler-mean")
            malformed(path, reader.line_no(), "expected a 'scaler-mean' line");
        stored.model.scaler.mean = parse_reals(reader, tokens, 1, dim);

        line = reader.require("scaler-std line");
        tokens = split_ws(line);
        if (tokens.empty() || tokens.front() != "scaler-std")
            malformed(path, reader.line_no(), "expected a 'scaler-std' line");
        stored.model.scaler.std_dev = parse_reals(reader, tokens, 1, dim);
        for (double s : stored.model.scaler.std_dev)
            if (s <= 0.0)
                malformed(path, reader.line_no(), "scaler std entries must be positive");
    }

    std::size_t speaker_count = 0;
    {
        const Fields f(reader, reader.require("speakers line"), "speakers");
        const long long c = f.integer("count");
        if (c < 2)
            malformed(path, reader.line_no(), "a model needs at least 2 speakers");
        speaker_count = std::size_t(c);
    }
    for (std::size_t s = 0; s < speaker_count; ++s) {
        const Fields f(reader, reader.require("speaker line"), "speaker");
        const int id = int(f.integer("id"));
        if (id < 1) malformed(path, reader.line_no(), "speaker ids must be >= 1");
        SpeakerInfo info;
        info.utterance_count = int(f.integer("utterances"));
        info.enrolled_at = std::string(f.get("enrolled_at"));
        info.name = std::string(f.get("name"));
        if (info.name.empty())
            malformed(path, reader.line_no(), "speaker name must not be empty");
        if (!stored.registry.entries.emplace(id, std::move(info)).second)
            malformed(path, reader.line_no(),
                      "duplicate speaker id " + std::to_string(id));
    }

    for (std::size_t k = 0; k < speaker_count; ++k) {
        const Fields f(reader, reader.require("model line"), "model");
        const int id = int(f.integer("speaker"));
        if (stored.registry.entries.find(id) == stored.registry.entries.end())
            throw ConsistencyError(path + ":" + std::to_string(reader.line_no()) +
                                   ": model for speaker " + std::to_string(id) +
                                   " has no registry entry");
        if (!stored.model.speaker_ids.empty() &&
            id <= stored.model.speaker_ids.back())
            malformed(path, reader.line_no(),
                      "model blocks must come in ascending speaker order");

        svm::SvmModel model;
        model.kernel = kernel;
        model.bias = f.real("bias");
        model.solver_name = std::string(f.get("solver"));
        model.C = f.real("C");
        model.iterations = std::uint64_t(f.integer("iterations"));
        model.train_seconds = f.real("wall_seconds");
        model.truncated = f.integer("truncated") != 0;
        model.dual_objective = f.real("dual_objective");
        const long long sv_count = f.integer("sv_count");
        if (sv_count < 0)
            malformed(path, reader.line_no(), "negative sv_count");

        for (long long s = 0; s < sv_count; ++s) {
            line = reader.require("sv line");
            const auto tokens = split_ws(line);
            if (tokens.empty() || tokens.front() != "sv")
                malformed(path, reader.line_no(),
                          "expected an 'sv' line (sv_count says " +
                              std::to_string(sv_count) + " rows)");
            const std::vector<double> values =
                parse_reals(reader, tokens, 1, dim + 1);
            if (std::abs(values.front()) > model.C * (1.0 + 1e-12))
                malformed(path, reader.line_no(),
                          "support-vector coefficient exceeds C");
            model.coeffs.push_back(values.front());
            model.support_vectors.emplace_back(values.begin() + 1, values.end());
        }
        model.finalize_weights();
        stored.model.speaker_ids.push_back(id);
        stored.model.models.push_back(std::move(model));
    }

    line = reader.require("end line");
    if (line != "end") malformed(path, reader.line_no(), "expected 'end'");

    return stored;
}

void write_dataset_csv(const features::LabeledDataset& dataset,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path);

    std::string header = "label";
    for (std::size_t i = 0; i < dataset.feature_dim; ++i)
        header += ",f" + std::to_string(i);
    out << header << '\n';
    for (const features::LabeledRow& row : dataset.rows) {
        if (row.features.dim() != dataset.feature_dim)
            throw DimensionMismatch("row dim " + std::to_string(row.features.dim()) +
                                    " vs dataset dim " +
                                    std::to_string(dataset.feature_dim));
        std::string line = std::to_string(row.label);
        for (double v : row.features.values) {
            line += ',';
            line += format_real(v);
        }
        out << line << '\n';
    }
    if (!out) throw IoFailure("write failed: " + path);
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

features::LabeledDataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open dataset: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw MalformedCsv(path + ": empty file, expected a header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv(line);
    if (header.empty() || header.front() != "label")
        throw MalformedCsv(path + ":1: header must start with 'label'");
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i] != "f" + std::to_string(i - 1))
            throw MalformedCsv(path + ":1: column " + std::to_string(i) +
                               " must be named f" + std::to_string(i - 1));
    }
    const std::size_t header_dim = header.size() - 1;
    if (header_dim == 0) throw MalformedCsv(path + ":1: no feature columns");

    features::LabeledDataset dataset;
    dataset.feature_dim = header_dim;

    std::size_t line_no = 1;
    std::size_t row_width = 0;  // columns seen in the first data row
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto fields = split_csv(line);
        if (row_width == 0) row_width = fields.size();
        if (fields.size() != row_width)
            throw RaggedRows(path + ":" + std::to_string(line_no) + ": row has " +
                             std::to_string(fields.size()) +
                             " columns, earlier rows have " +
                             std::to_string(row_width));
        if (fields.size() != header_dim + 1)
            throw MalformedCsv(path + ":" + std::to_string(line_no) +
                               ": header declares " + std::to_string(header_dim) +
                               " features but row has " +
                               std::to_string(fields.size() - 1));

        features::LabeledRow row;
        {
            const std::string_view t = fields.front();
            long long label = 0;
            const auto [ptr, ec] =
                std::from_chars(t.data(), t.data() + t.size(), label);
            if (ec != std::errc() || ptr != t.data() + t.size() || label < 1)
                throw MalformedCsv(path + ":" + std::to_string(line_no) +
                                   ": column 1: bad label '" + std::string(t) + "'");
            row.label = int(label);
        }
        row.features.values.resize(header_dim);
        for (std::size_t i = 0; i < header_dim; ++i) {
            const std::string_view t = fields[i + 1];
            const auto [ptr, ec] = std::from_chars(
                t.data(), t.data() + t.size(), row.features.values[i]);
            if (ec != std::errc() || ptr != t.data() + t.size())
                throw MalformedCsv(path + ":" + std::to_string(line_no) +
                                   ": column " + std::to_string(i + 2) +
                                   ": not a number: '" + std::string(t) + "'");
        }
        dataset.rows.push_back(std::move(row));
    }
    return dataset;
}

}  // namespace voxid::store
