#ifndef RISKWARN_DATAPREP_HPP
#define RISKWARN_DATAPREP_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riskwarn/rng.hpp"

namespace riskwarn::dataprep {

// ============================================================================
// Types
// ============================================================================

/// ST marks a company under Special Treatment, the financial-distress label.
enum class Label { Normal, St };

inline const char* label_name(Label l) { return l == Label::St ? "ST" : "NORMAL"; }

struct Sample {
    std::string id;
    std::vector<double> features;
    Label label = Label::Normal;
};

struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<Sample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    std::size_t dim() const { return feature_names.size(); }

    std::size_t count(Label l) const {
        std::size_t n = 0;
        for (const auto& s : samples) {
            if (s.label == l) ++n;
        }
        return n;
    }

    void validate() const {
        std::set<std::string> ids;
        for (const auto& s : samples) {
            if (s.features.size() != dim()) {
                throw std::invalid_argument("dataset: sample '" + s.id + "' has wrong feature count");
            }
            if (!ids.insert(s.id).second) {
                throw std::invalid_argument("dataset: duplicate id '" + s.id + "'");
            }
        }
    }
};

/// Per-feature min/max bounds fitted on training data.
struct NormalizationSpec {
    std::vector<double> min;
    std::vector<double> max;
    std::vector<bool> constant;

    std::size_t dim() const { return min.size(); }
};

enum class SplitMode { ByFraction, ByCount };

struct SplitSpec {
    SplitMode mode = SplitMode::ByCount;
    int test_normal = 0;          // ByCount: held-out samples per class
    int test_st = 0;
    double test_fraction = 0.2;   // ByFraction: per-class hold-out rate
    std::uint64_t seed = 0;
};

struct Split {
    Dataset train;
    Dataset test;
};

struct CleanPolicy {
    double zscore_cutoff = 4.0;
};

struct CleanReport {
    struct Removal {
        std::string id;
        std::vector<std::string> features;  // offending feature names
    };
    std::vector<Removal> removed;
    std::vector<std::string> flags;  // zero-variance features, capped removals
    int passes = 0;
};

// ============================================================================
// CSV I/O
// ============================================================================

namespace detail_csv {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace detail_csv

/// Loads a dataset from CSV: header `id,<features...>,label`, labels ST or
/// NORMAL (case-insensitive). Errors carry 1-based row/column positions,
/// counting the header as row 1.
inline Dataset load_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header = detail_csv::split_line(line);
    if (header.size() < 2) throw std::runtime_error("csv: header must contain id and label columns");
    for (auto& h : header) h = detail_csv::trim(h);
    if (header.front() != "id") throw std::runtime_error("csv: first header field must be 'id'");
    if (header.back() != "label") throw std::runtime_error("csv: last header field must be 'label'");

    Dataset data;
    data.feature_names.assign(header.begin() + 1, header.end() - 1);
    {
        std::set<std::string> seen;
        for (const auto& h : header) {
            if (!seen.insert(h).second) throw std::runtime_error("csv: duplicate header field '" + h + "'");
        }
    }

    std::set<std::string> ids;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail_csv::trim(line).empty()) continue;

        std::vector<std::string> fields = detail_csv::split_line(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error("csv: row " + std::to_string(row) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        }

        Sample s;
        s.id = detail_csv::trim(fields.front());
        if (s.id.empty()) throw std::runtime_error("csv: empty id at row " + std::to_string(row));
        if (!ids.insert(s.id).second) {
            throw std::runtime_error("csv: duplicate id '" + s.id + "' at row " + std::to_string(row));
        }

        s.features.reserve(data.dim());
        for (std::size_t col = 1; col + 1 < fields.size(); ++col) {
            const std::string cell = detail_csv::trim(fields[col]);
            char* end = nullptr;
            const double v = cell.empty() ? NAN : std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
                throw std::runtime_error("csv: non-numeric feature at row " + std::to_string(row) +
                                         ", column " + std::to_string(col + 1));
            }
            s.features.push_back(v);
        }

        const std::string token = detail_csv::lower(detail_csv::trim(fields.back()));
        if (token == "st") {
            s.label = Label::St;
        } else if (token == "normal") {
            s.label = Label::Normal;
        } else {
            throw std::runtime_error("csv: unknown label '" + detail_csv::trim(fields.back()) +
                                     "' at row " + std::to_string(row));
        }
        data.samples.push_back(std::move(s));
    }
    data.validate();
    return data;
}

inline Dataset load_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
    return load_csv(in);
}

/// Loader for files to be scored rather than fitted: header `id,<features...>`
/// with an optional trailing `label` column. Labels are parsed when present
/// and default to NORMAL otherwise.
inline Dataset load_scoring_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = detail_csv::split_line(line);
    for (auto& h : header) h = detail_csv::trim(h);

    const bool labeled = !header.empty() && header.back() == "label";
    std::ostringstream rebuilt;
    rebuilt << line;
    if (!labeled) rebuilt << ",label";
    rebuilt << '\n';
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        rebuilt << line;  // blank lines kept so error rows keep their numbers
        if (!labeled && !detail_csv::trim(line).empty()) rebuilt << ",NORMAL";
        rebuilt << '\n';
    }
    std::istringstream replay(rebuilt.str());
    return load_csv(replay);
}

inline Dataset load_scoring_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
    return load_scoring_csv(in);
}

/// Writes a dataset with full double round-trip precision.
inline void save_csv(const Dataset& data, std::ostream& out) {
    out << "id";
    for (const auto& name : data.feature_names) out << ',' << name;
    out << ",label\n";
    char buf[64];
    for (const auto& s : data.samples) {
        out << s.id;
        for (double v : s.features) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << ',' << buf;
        }
        out << ',' << label_name(s.label) << '\n';
    }
}

inline void save_csv_file(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
    save_csv(data, out);
}

// ============================================================================
// Anomaly purging
// ============================================================================

/// Removes samples with any feature beyond `zscore_cutoff` sample standard
/// deviations from the feature mean. Passes repeat until a fixpoint, so a
/// second clean with the same policy removes nothing. Removal never empties
/// a label class; protected samples are flagged instead.
inline std::pair<Dataset, CleanReport> clean(const Dataset& data, const CleanPolicy& policy) {
    if (!(policy.zscore_cutoff > 0.0)) {
        throw std::invalid_argument("clean: cutoff must be positive");
    }
    if (data.size() < 3) throw std::invalid_argument("clean: need at least 3 samples");

    Dataset current = data;
    CleanReport report;
    const std::size_t m = data.dim();

    bool removed_any = true;
    while (removed_any) {
        removed_any = false;
        ++report.passes;
        const std::size_t n = current.size();
        if (n < 3) break;

        std::vector<double> mu(m, 0.0), sd(m, 0.0);
        std::vector<bool> usable(m, false);
        for (std::size_t f = 0; f < m; ++f) {
            double s = 0.0;
            for (const auto& smp : current.samples) s += smp.features[f];
            mu[f] = s / static_cast<double>(n);
            double ss = 0.0;
            for (const auto& smp : current.samples) {
                const double d = smp.features[f] - mu[f];
                ss += d * d;
            }
            const double var = ss / static_cast<double>(n - 1);
            if (var > 0.0) {
                sd[f] = std::sqrt(var);
                usable[f] = true;
            } else if (report.passes == 1) {
                report.flags.push_back("feature '" + current.feature_names[f] +
                                       "' has zero variance; skipped in anomaly scan");
            }
        }

        std::size_t n_normal = current.count(Label::Normal);
        std::size_t n_st = current.count(Label::St);

        Dataset kept;
        kept.feature_names = current.feature_names;
        for (const auto& smp : current.samples) {
            std::vector<std::string> offending;
            for (std::size_t f = 0; f < m; ++f) {
                if (!usable[f]) continue;
                const double z = std::fabs(smp.features[f] - mu[f]) / sd[f];
                if (z > policy.zscore_cutoff) offending.push_back(current.feature_names[f]);
            }
            if (offending.empty()) {
                kept.samples.push_back(smp);
                continue;
            }
            std::size_t& class_count = (smp.label == Label::St) ? n_st : n_normal;
            if (class_count <= 1) {
                report.flags.push_back("sample '" + smp.id +
                                       "' exceeds the cutoff but is kept: removing it would empty class " +
                                       label_name(smp.label));
                kept.samples.push_back(smp);
                continue;
            }
            --class_count;
            report.removed.push_back({smp.id, std::move(offending)});
            removed_any = true;
        }
        current = std::move(kept);
    }
    return {std::move(current), std::move(report)};
}

// ============================================================================
// Linear (min-max) normalization
// ============================================================================

inline NormalizationSpec fit_normalizer(const Dataset& train) {
    if (train.empty()) throw std::invalid_argument("fit_normalizer: empty training set");
    const std::size_t m = train.dim();
    NormalizationSpec spec;
    spec.min.assign(m, 0.0);
    spec.max.assign(m, 0.0);
    spec.constant.assign(m, false);
    for (std::size_t f = 0; f < m; ++f) {
        double lo = train.samples[0].features[f];
        double hi = lo;
        for (const auto& s : train.samples) {
            lo = std::min(lo, s.features[f]);
            hi = std::max(hi, s.features[f]);
        }
        spec.min[f] = lo;
        spec.max[f] = hi;
        spec.constant[f] = (lo == hi);
    }
    return spec;
}

/// x' = (x - min) / (max - min), clipped to [0,1]; constant features map
/// to 0 so they carry no signal downstream.
inline Dataset apply_normalizer(const NormalizationSpec& spec, const Dataset& data) {
    if (spec.dim() != data.dim()) {
        throw std::invalid_argument("apply_normalizer: spec dimension mismatch");
    }
    Dataset out = data;
    for (auto& s : out.samples) {
        for (std::size_t f = 0; f < spec.dim(); ++f) {
            if (spec.constant[f]) {
                s.features[f] = 0.0;
            } else {
                const double v = (s.features[f] - spec.min[f]) / (spec.max[f] - spec.min[f]);
                s.features[f] = std::clamp(v, 0.0, 1.0);
            }
        }
    }
    return out;
}

inline std::vector<double> apply_normalizer(const NormalizationSpec& spec,
                                            const std::vector<double>& features) {
    if (spec.dim() != features.size()) {
        throw std::invalid_argument("apply_normalizer: spec dimension mismatch");
    }
    std::vector<double> out(features.size());
    for (std::size_t f = 0; f < spec.dim(); ++f) {
        out[f] = spec.constant[f]
                     ? 0.0
                     : std::clamp((features[f] - spec.min[f]) / (spec.max[f] - spec.min[f]), 0.0, 1.0);
    }
    return out;
}

// ============================================================================
// Stratified splitting
// ============================================================================

/// Draws the requested number of test samples per class uniformly at random
/// (seeded); train is the complement, with input order preserved in both.
inline Split stratified_split(const Dataset& data, const SplitSpec& spec) {
    const std::size_t n_normal = data.count(Label::Normal);
    const std::size_t n_st = data.count(Label::St);

    std::size_t want_normal = 0, want_st = 0;
    if (spec.mode == SplitMode::ByCount) {
        if (spec.test_normal < 0 || spec.test_st < 0) {
            throw std::invalid_argument("split: negative test count");
        }
        want_normal = static_cast<std::size_t>(spec.test_normal);
        want_st = static_cast<std::size_t>(spec.test_st);
    } else {
        if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
            throw std::invalid_argument("split: fraction must lie in (0,1)");
        }
        want_normal = static_cast<std::size_t>(std::llround(spec.test_fraction * static_cast<double>(n_normal)));
        want_st = static_cast<std::size_t>(std::llround(spec.test_fraction * static_cast<double>(n_st)));
    }
    if (want_normal > n_normal || want_st > n_st) {
        throw std::invalid_argument("split: requested test counts exceed class sizes");
    }

    // Choose test indices per class via a seeded shuffle of class positions.
    Rng rng(spec.seed);
    std::vector<std::size_t> normal_pos, st_pos;
    for (std::size_t i = 0; i < data.size(); ++i) {
        (data.samples[i].label == Label::St ? st_pos : normal_pos).push_back(i);
    }
    rng.shuffle(normal_pos);
    rng.shuffle(st_pos);

    std::vector<bool> in_test(data.size(), false);
    for (std::size_t k = 0; k < want_normal; ++k) in_test[normal_pos[k]] = true;
    for (std::size_t k = 0; k < want_st; ++k) in_test[st_pos[k]] = true;

    Split split;
    split.train.feature_names = data.feature_names;
    split.test.feature_names = data.feature_names;
    for (std::size_t i = 0; i < data.size(); ++i) {
        (in_test[i] ? split.test : split.train).samples.push_back(data.samples[i]);
    }
    return split;
}

}  // namespace riskwarn::dataprep

#endif  // RISKWARN_DATAPREP_HPP
