#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "idsim/error.hpp"
#include "idsim/vocabulary.hpp"

namespace idsim {

enum class Label { Normal, Abnormal };

inline std::string_view to_string(Label l) {
    return l == Label::Normal ? "Normal" : "Abnormal";
}

// Case-insensitive "normal" / "abnormal".
inline Label parse_label(std::string_view token) {
    std::string lower(token);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "normal") return Label::Normal;
    if (lower == "abnormal") return Label::Abnormal;
    throw Error("unknown label token '" + std::string(token) + "'");
}

// Per-process frequency counts of system calls, one coordinate per
// vocabulary entry. Counts are whole nonnegative numbers; they are stored as
// doubles because everything downstream (similarities, centroids) works in
// double precision.
struct ProcessVector {
    std::string id;
    std::vector<double> counts;

    bool operator==(const ProcessVector&) const = default;
};

// A process/system-call count matrix plus optional per-process class labels.
// Immutable after construction by convention; safe to share across threads.
struct LabeledDataset {
    Vocabulary vocabulary;
    std::vector<ProcessVector> processes;
    std::vector<Label> labels;  // empty, or one entry per process

    std::size_t size() const { return processes.size(); }
    bool labeled() const { return !labels.empty(); }

    void validate() const {
        vocabulary.validate();
        if (labeled() && labels.size() != processes.size())
            throw Error("dataset: label count does not match process count");
        std::unordered_set<std::string> ids;
        for (const auto& p : processes) {
            if (p.id.empty())
                throw Error("dataset: empty process id");
            if (!ids.insert(p.id).second)
                throw Error("dataset: duplicate process id '" + p.id + "'");
            if (p.counts.size() != vocabulary.size())
                throw Error("dataset: process '" + p.id + "' has " +
                            std::to_string(p.counts.size()) + " counts for a " +
                            std::to_string(vocabulary.size()) + "-call vocabulary");
            for (double c : p.counts)
                if (!(c >= 0.0) || c != std::floor(c))
                    throw Error("dataset: process '" + p.id + "' has a negative or non-integer count");
        }
    }

    std::size_t index_of(std::string_view id) const {
        for (std::size_t i = 0; i < processes.size(); ++i)
            if (processes[i].id == id) return i;
        throw Error("dataset: no process with id '" + std::string(id) + "'");
    }

    bool operator==(const LabeledDataset&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            cells.emplace_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return cells;
}

inline long long parse_count(std::string_view cell, std::size_t line_no) {
    long long value = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw Error("line " + std::to_string(line_no) + ": count '" + std::string(cell) +
                    "' is not a nonnegative integer");
    if (value < 0)
        throw Error("line " + std::to_string(line_no) + ": negative count '" + std::string(cell) + "'");
    return value;
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

}  // namespace detail

// Parses the canonical CSV matrix format:
//   header:  id,<call name>...[,class]
//   row:     <process id>,<count>...[,<label>]
// With expect_labels the trailing class column is required; without it the
// file must not carry one. Row order in the file is preserved.
inline LabeledDataset parse_matrix(std::istream& in, bool expect_labels,
                                   const std::string& source = "<stream>") {
    std::string line;
    if (!std::getline(in, line))
        throw Error(source + ": missing header row");
    auto header = detail::split_csv_line(line);
    if (header.empty() || header[0] != "id")
        throw Error(source + ": header must start with 'id'");

    bool has_class = header.size() >= 2 && detail::iequals(header.back(), "class");
    if (expect_labels && !has_class)
        throw Error(source + ": expected a trailing 'class' column");
    if (!expect_labels && has_class)
        throw Error(source + ": unexpected 'class' column (labels not expected)");

    LabeledDataset ds;
    const std::size_t ncalls = header.size() - 1 - (has_class ? 1 : 0);
    ds.vocabulary.names.assign(header.begin() + 1, header.begin() + 1 + ncalls);
    ds.vocabulary.validate();

    const std::size_t row_cells = 1 + ncalls + (has_class ? 1 : 0);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != row_cells)
            throw Error(source + ": line " + std::to_string(line_no) + ": ragged row (" +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(row_cells) + ")");
        ProcessVector p;
        p.id = cells[0];
        p.counts.reserve(ncalls);
        for (std::size_t s = 0; s < ncalls; ++s)
            p.counts.push_back(static_cast<double>(detail::parse_count(cells[1 + s], line_no)));
        ds.processes.push_back(std::move(p));
        if (has_class) ds.labels.push_back(parse_label(cells.back()));
    }
    ds.validate();
    return ds;
}

inline LabeledDataset load_matrix(const std::filesystem::path& path, bool expect_labels) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    return parse_matrix(in, expect_labels, path.string());
}

inline void write_matrix(const LabeledDataset& ds, std::ostream& out) {
    out << "id";
    for (const auto& n : ds.vocabulary.names) out << ',' << n;
    if (ds.labeled()) out << ",class";
    out << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << ds.processes[i].id;
        for (double c : ds.processes[i].counts)
            out << ',' << static_cast<long long>(c);
        if (ds.labeled()) out << ',' << to_string(ds.labels[i]);
        out << '\n';
    }
}

inline void write_matrix(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    write_matrix(ds, out);
    if (!out.good())
        throw Error("write failed for '" + path.string() + "'");
}

}  // namespace idsim
