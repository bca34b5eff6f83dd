#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/learn.hpp"
#include "corrclust/partition.hpp"

// Tab-separated text formats, one record per line, with a single "#" header
// line carrying the kind and dimensions. Floating-point values are written
// with 17 significant digits so write/read round-trips bit-exactly.

namespace corrclust {
namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, result.ptr);
}

class LineReader {
public:
    explicit LineReader(const std::string& path) : path_(path), in_(path) {
        require(in_.good(), errc::io_error, "cannot open " + path);
    }

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++lineno_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void error(const std::string& message) const {
        fail(errc::parse_error, path_ + ":" + std::to_string(lineno_) + ": " + message);
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream in_;
    int lineno_ = 0;
};

class FieldParser {
public:
    FieldParser(const LineReader& reader, std::string_view line) : reader_(reader), rest_(line) {}

    long long integer() {
        skip_blanks();
        long long value = 0;
        auto [ptr, ec] = std::from_chars(rest_.data(), rest_.data() + rest_.size(), value);
        if (ec != std::errc()) reader_.error("expected an integer");
        rest_.remove_prefix(ptr - rest_.data());
        return value;
    }

    double real() {
        skip_blanks();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(rest_.data(), rest_.data() + rest_.size(), value);
        if (ec != std::errc()) reader_.error("expected a number");
        rest_.remove_prefix(ptr - rest_.data());
        return value;
    }

    std::string word() {
        skip_blanks();
        std::size_t end = 0;
        while (end < rest_.size() && rest_[end] != '\t' && rest_[end] != ' ') ++end;
        if (end == 0) reader_.error("expected a field");
        std::string value(rest_.substr(0, end));
        rest_.remove_prefix(end);
        return value;
    }

    void done() {
        skip_blanks();
        if (!rest_.empty()) reader_.error("trailing characters");
    }

private:
    void skip_blanks() {
        while (!rest_.empty() && (rest_.front() == '\t' || rest_.front() == ' '))
            rest_.remove_prefix(1);
    }

    const LineReader& reader_;
    std::string_view rest_;
};

// Header of the shape "#kind key=<int> key=<int> ...". Returns the values in
// key order.
inline std::vector<long long> parse_header(LineReader& reader, const std::string& kind,
                                           const std::vector<std::string>& keys) {
    std::string line;
    if (!reader.next(line)) reader.error("missing header line");
    std::string_view rest(line);
    const std::string lead = "#" + kind;
    if (rest.substr(0, lead.size()) != lead) reader.error("expected header '" + lead + " ...'");
    rest.remove_prefix(lead.size());
    std::vector<long long> values;
    for (const auto& key : keys) {
        while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        const std::string want = key + "=";
        if (rest.substr(0, want.size()) != want) reader.error("expected '" + want + "<value>'");
        rest.remove_prefix(want.size());
        long long value = 0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
        if (ec != std::errc()) reader.error("bad value for '" + key + "'");
        values.push_back(value);
        rest.remove_prefix(ptr - rest.data());
    }
    return values;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    require(out.good(), errc::io_error, "cannot write " + path);
    return out;
}

}  // namespace detail

inline void write_logits(const LogitMatrix& m, const std::string& path) {
    auto out = detail::open_output(path);
    out << "#logits n=" << m.size() << "\n";
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j)
            out << i << '\t' << j << '\t' << detail::format_double(m(i, j)) << "\n";
    require(out.good(), errc::io_error, "write failed: " + path);
}

inline LogitMatrix read_logits(const std::string& path) {
    detail::LineReader reader(path);
    const long long n = detail::parse_header(reader, "logits", {"n"})[0];
    if (n < 1) reader.error("need n >= 1");
    std::vector<double> values(pair_count(int(n)), 0.0);
    std::vector<std::uint8_t> seen(values.size(), 0);
    std::size_t filled = 0;
    std::string line;
    while (reader.next(line)) {
        detail::FieldParser fields(reader, line);
        const long long i = fields.integer();
        const long long j = fields.integer();
        const double v = fields.real();
        fields.done();
        if (i < 0 || j <= i || j >= n) reader.error("bad pair (" + std::to_string(i) + "," +
                                                    std::to_string(j) + ")");
        if (!std::isfinite(v))
            fail(errc::non_finite, path + ": pair (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") is not finite");
        const std::size_t k = pair_index(int(i), int(j), int(n));
        if (seen[k])
            fail(errc::duplicate_pair, path + ": pair (" + std::to_string(i) + "," +
                                           std::to_string(j) + ") appears twice");
        seen[k] = 1;
        ++filled;
        values[k] = v;
    }
    if (filled != values.size())
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (!seen[pair_index(int(i), int(j), int(n))])
                    fail(errc::missing_pair, path + ": pair (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ") is missing");
    return LogitMatrix::from_values(int(n), std::move(values));
}

inline void write_partition(const Partition& p, const std::string& path) {
    auto out = detail::open_output(path);
    out << "#partition n=" << p.size() << "\n";
    for (int e = 0; e < p.size(); ++e) out << e << '\t' << p.cluster_of()[e] << "\n";
    require(out.good(), errc::io_error, "write failed: " + path);
}

inline Partition read_partition(const std::string& path) {
    detail::LineReader reader(path);
    const long long n = detail::parse_header(reader, "partition", {"n"})[0];
    if (n < 1) reader.error("need n >= 1");
    std::vector<int> label_of(std::size_t(n), 0);
    std::vector<std::uint8_t> seen(std::size_t(n), 0);
    std::string line;
    while (reader.next(line)) {
        detail::FieldParser fields(reader, line);
        const long long e = fields.integer();
        const long long label = fields.integer();
        fields.done();
        if (e < 0 || e >= n) reader.error("element " + std::to_string(e) + " outside [0,n)");
        if (seen[e]) reader.error("element " + std::to_string(e) + " appears twice");
        seen[e] = 1;
        label_of[e] = int(label);
    }
    for (long long e = 0; e < n; ++e)
        if (!seen[e]) fail(errc::parse_error, path + ": element " + std::to_string(e) + " is missing");
    return Partition::from_assignments(label_of);
}

inline void write_pair_labeling(const PairLabeling& y, const std::string& path) {
    auto out = detail::open_output(path);
    out << "#pairs n=" << y.size() << "\n";
    for (int i = 0; i < y.size(); ++i)
        for (int j = i + 1; j < y.size(); ++j) out << i << '\t' << j << '\t' << int(y(i, j)) << "\n";
    require(out.good(), errc::io_error, "write failed: " + path);
}

inline PairLabeling read_pair_labeling(const std::string& path) {
    detail::LineReader reader(path);
    const long long n = detail::parse_header(reader, "pairs", {"n"})[0];
    if (n < 1) reader.error("need n >= 1");
    std::vector<std::uint8_t> values(pair_count(int(n)), 0);
    std::vector<std::uint8_t> seen(values.size(), 0);
    std::size_t filled = 0;
    std::string line;
    while (reader.next(line)) {
        detail::FieldParser fields(reader, line);
        const long long i = fields.integer();
        const long long j = fields.integer();
        const long long v = fields.integer();
        fields.done();
        if (i < 0 || j <= i || j >= n) reader.error("bad pair (" + std::to_string(i) + "," +
                                                    std::to_string(j) + ")");
        if (v != 0 && v != 1) reader.error("labels must be 0 or 1");
        const std::size_t k = pair_index(int(i), int(j), int(n));
        if (seen[k])
            fail(errc::duplicate_pair, path + ": pair (" + std::to_string(i) + "," +
                                           std::to_string(j) + ") appears twice");
        seen[k] = 1;
        ++filled;
        values[k] = std::uint8_t(v);
    }
    if (filled != values.size())
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (!seen[pair_index(int(i), int(j), int(n))])
                    fail(errc::missing_pair, path + ": pair (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ") is missing");
    return PairLabeling::from_values(int(n), std::move(values));
}

inline void write_cross(const CrossScores& cross, const std::string& path) {
    auto out = detail::open_output(path);
    out << "#cross n1=" << cross.rows() << " n2=" << cross.cols() << "\n";
    for (int i = 0; i < cross.rows(); ++i)
        for (int j = 0; j < cross.cols(); ++j)
            out << i << '\t' << j << '\t' << detail::format_double(cross(i, j)) << "\n";
    require(out.good(), errc::io_error, "write failed: " + path);
}

inline CrossScores read_cross(const std::string& path) {
    detail::LineReader reader(path);
    const auto dims = detail::parse_header(reader, "cross", {"n1", "n2"});
    const long long n1 = dims[0], n2 = dims[1];
    if (n1 < 1 || n2 < 1) reader.error("need n1,n2 >= 1");
    std::vector<double> values(std::size_t(n1) * std::size_t(n2), 0.0);
    std::vector<std::uint8_t> seen(values.size(), 0);
    std::size_t filled = 0;
    std::string line;
    while (reader.next(line)) {
        detail::FieldParser fields(reader, line);
        const long long i = fields.integer();
        const long long j = fields.integer();
        const double v = fields.real();
        fields.done();
        if (i < 0 || i >= n1 || j < 0 || j >= n2)
            reader.error("bad pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
        if (!std::isfinite(v))
            fail(errc::non_finite, path + ": pair (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") is not finite");
        const std::size_t k = std::size_t(i) * std::size_t(n2) + std::size_t(j);
        if (seen[k])
            fail(errc::duplicate_pair, path + ": pair (" + std::to_string(i) + "," +
                                           std::to_string(j) + ") appears twice");
        seen[k] = 1;
        ++filled;
        values[k] = v;
    }
    if (filled != values.size())
        fail(errc::incomplete_cross,
             path + ": " + std::to_string(values.size() - filled) + " cross scores are missing");
    return CrossScores::from_values(int(n1), int(n2), std::move(values));
}

inline void write_groups(const GroupLabels& groups, const std::string& path) {
    auto out = detail::open_output(path);
    out << "#groups n=" << groups.size() << "\n";
    for (int e = 0; e < groups.size(); ++e) out << e << '\t' << groups.tags[e] << "\n";
    require(out.good(), errc::io_error, "write failed: " + path);
}

inline GroupLabels read_groups(const std::string& path) {
    detail::LineReader reader(path);
    const long long n = detail::parse_header(reader, "groups", {"n"})[0];
    if (n < 1) reader.error("need n >= 1");
    GroupLabels groups;
    groups.tags.assign(std::size_t(n), "");
    std::vector<std::uint8_t> seen(std::size_t(n), 0);
    std::string line;
    while (reader.next(line)) {
        detail::FieldParser fields(reader, line);
        const long long e = fields.integer();
        const std::string tag = fields.word();
        fields.done();
        if (e < 0 || e >= n) reader.error("element " + std::to_string(e) + " outside [0,n)");
        if (seen[e]) reader.error("element " + std::to_string(e) + " appears twice");
        seen[e] = 1;
        groups.tags[e] = tag;
    }
    for (long long e = 0; e < n; ++e)
        if (!seen[e]) fail(errc::parse_error, path + ": element " + std::to_string(e) + " is missing");
    return groups;
}

inline void write_features(const FeatureSet& features, const std::string& path) {
    auto out = detail::open_output(path);
    out << "#features n=" << features.n << " m=" << features.m << "\n";
    for (int e = 0; e < features.n; ++e) {
        out << e;
        for (double v : features.row(e)) out << '\t' << detail::format_double(v);
        out << "\n";
    }
    require(out.good(), errc::io_error, "write failed: " + path);
}

inline FeatureSet read_features(const std::string& path) {
    detail::LineReader reader(path);
    const auto dims = detail::parse_header(reader, "features", {"n", "m"});
    const long long n = dims[0], m = dims[1];
    if (n < 1 || m < 1) reader.error("need n,m >= 1");
    std::vector<double> values(std::size_t(n) * std::size_t(m), 0.0);
    std::vector<std::uint8_t> seen(std::size_t(n), 0);
    std::string line;
    while (reader.next(line)) {
        detail::FieldParser fields(reader, line);
        const long long e = fields.integer();
        if (e < 0 || e >= n) reader.error("element " + std::to_string(e) + " outside [0,n)");
        if (seen[e]) reader.error("element " + std::to_string(e) + " appears twice");
        seen[e] = 1;
        for (long long d = 0; d < m; ++d) values[std::size_t(e) * m + d] = fields.real();
        fields.done();
    }
    for (long long e = 0; e < n; ++e)
        if (!seen[e]) fail(errc::parse_error, path + ": element " + std::to_string(e) + " is missing");
    return FeatureSet::from_values(int(n), int(m), std::move(values));
}

inline void write_classes(const std::vector<int>& class_of, const std::string& path) {
    auto out = detail::open_output(path);
    out << "#classes n=" << class_of.size() << "\n";
    for (std::size_t e = 0; e < class_of.size(); ++e) out << e << '\t' << class_of[e] << "\n";
    require(out.good(), errc::io_error, "write failed: " + path);
}

inline std::vector<int> read_classes(const std::string& path) {
    detail::LineReader reader(path);
    const long long n = detail::parse_header(reader, "classes", {"n"})[0];
    if (n < 1) reader.error("need n >= 1");
    std::vector<int> class_of(std::size_t(n), 0);
    std::vector<std::uint8_t> seen(std::size_t(n), 0);
    std::string line;
    while (reader.next(line)) {
        detail::FieldParser fields(reader, line);
        const long long e = fields.integer();
        const long long c = fields.integer();
        fields.done();
        if (e < 0 || e >= n) reader.error("element " + std::to_string(e) + " outside [0,n)");
        if (seen[e]) reader.error("element " + std::to_string(e) + " appears twice");
        seen[e] = 1;
        class_of[e] = int(c);
    }
    for (long long e = 0; e < n; ++e)
        if (!seen[e]) fail(errc::parse_error, path + ": element " + std::to_string(e) + " is missing");
    return class_of;
}

inline void write_assignments(const std::vector<int>& assignment, const std::string& path) {
    auto out = detail::open_output(path);
    out << "#assign n=" << assignment.size() << "\n";
    for (std::size_t e = 0; e < assignment.size(); ++e) out << e << '\t' << assignment[e] << "\n";
    require(out.good(), errc::io_error, "write failed: " + path);
}

inline std::vector<int> read_assignments(const std::string& path) {
    detail::LineReader reader(path);
    const long long n = detail::parse_header(reader, "assign", {"n"})[0];
    if (n < 1) reader.error("need n >= 1");
    std::vector<int> assignment(std::size_t(n), -1);
    std::vector<std::uint8_t> seen(std::size_t(n), 0);
    std::string line;
    while (reader.next(line)) {
        detail::FieldParser fields(reader, line);
        const long long e = fields.integer();
        const long long c = fields.integer();
        fields.done();
        if (e < 0 || e >= n) reader.error("element " + std::to_string(e) + " outside [0,n)");
        if (seen[e]) reader.error("element " + std::to_string(e) + " appears twice");
        seen[e] = 1;
        assignment[e] = int(c);
    }
    for (long long e = 0; e < n; ++e)
        if (!seen[e]) fail(errc::parse_error, path + ": element " + std::to_string(e) + " is missing");
    return assignment;
}

// Model file: "#model m=<M>" then one "tau <value>" line and one line per
// parameter, "<index> <value>", weights first and the bias last.
inline void write_model(const ModelParams& params, const std::string& path) {
    auto out = detail::open_output(path);
    out << "#model m=" << params.m << "\n";
    out << "tau\t" << detail::format_double(params.tau) << "\n";
    for (std::size_t d = 0; d < params.theta.size(); ++d)
        out << d << '\t' << detail::format_double(params.theta[d]) << "\n";
    require(out.good(), errc::io_error, "write failed: " + path);
}

inline ModelParams read_model(const std::string& path) {
    detail::LineReader reader(path);
    const long long m = detail::parse_header(reader, "model", {"m"})[0];
    if (m < 1) reader.error("need m >= 1");
    std::string line;
    if (!reader.next(line)) reader.error("missing tau line");
    detail::FieldParser tau_fields(reader, line);
    if (tau_fields.word() != "tau") reader.error("expected 'tau <value>'");
    const double tau = tau_fields.real();
    tau_fields.done();
    std::vector<double> theta(std::size_t(2 * m + 1), 0.0);
    std::vector<std::uint8_t> seen(theta.size(), 0);
    while (reader.next(line)) {
        detail::FieldParser fields(reader, line);
        const long long d = fields.integer();
        const double v = fields.real();
        fields.done();
        if (d < 0 || d >= (long long)theta.size())
            reader.error("parameter index " + std::to_string(d) + " outside [0," +
                         std::to_string(theta.size()) + ")");
        if (seen[d]) reader.error("parameter " + std::to_string(d) + " appears twice");
        seen[d] = 1;
        theta[d] = v;
    }
    for (std::size_t d = 0; d < theta.size(); ++d)
        if (!seen[d]) fail(errc::parse_error, path + ": parameter " + std::to_string(d) + " is missing");
    return ModelParams::validated(int(m), std::move(theta), tau);
}

}  // namespace corrclust
