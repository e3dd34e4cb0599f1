#include "mcout/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "mcout/errors.hpp"

namespace mcout {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace

ChainMatrix read_chain_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        for (auto f : split(line)) {
            if (f.size() >= 2 && f.front() == '"' && f.back() == '"') f = f.substr(1, f.size() - 2);
            labels.emplace_back(f);
        }
        break;
    }
    if (labels.empty()) throw ParseError("missing header row", line_no == 0 ? 1 : line_no);

    ChainMatrix chain(labels.size(), labels);
    std::vector<double> row(labels.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        if (fields.size() != labels.size()) {
            throw ParseError("expected " + std::to_string(labels.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto f = fields[c];
            const char* end = f.data() + f.size();
            auto [ptr, ec] = std::from_chars(f.data(), end, row[c]);
            if (ec != std::errc() || ptr != end || f.empty()) {
                throw ParseError("cannot parse '" + std::string(f) + "' as a number", line_no);
            }
        }
        try {
            chain.append_row(row);
        } catch (const DataError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return chain;
}

ChainMatrix read_chain_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_chain_csv(in);
}

void write_chain_csv(std::ostream& out, const ChainMatrix& chain) {
    for (std::size_t c = 0; c < chain.cols(); ++c) {
        out << (c ? "," : "") << chain.label(c);
    }
    out << '\n';
    for (std::size_t r = 0; r < chain.rows(); ++r) {
        for (std::size_t c = 0; c < chain.cols(); ++c) {
            out << (c ? "," : "") << format_double(chain(r, c));
        }
        out << '\n';
    }
}

void write_chain_csv(const std::filesystem::path& path, const ChainMatrix& chain) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_chain_csv(out, chain);
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

}  // namespace mcout
