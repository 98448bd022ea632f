#include "pmot/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pmot {

namespace {

bool data_line(const std::string& line, std::string& trimmed) {
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return false;
    if (line[first] == '#') return false;
    trimmed = line.substr(first);
    return true;
}

std::vector<double> parse_fields(const std::string& line, int lineno) {
    std::istringstream fields(line);
    std::vector<double> out;
    std::string tok;
    while (fields >> tok) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("measure file line " + std::to_string(lineno) +
                                        ": cannot parse '" + tok + "' as a number");
        }
    }
    return out;
}

PersistenceMeasure load_with_columns(std::istream& in, int want_columns) {
    std::vector<WeightedAtom> atoms;
    std::string line, body;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!data_line(line, body)) continue;
        const auto fields = parse_fields(body, lineno);
        if (want_columns == 0) {
            // auto mode: first data line fixes the column count
            if (fields.size() != 2 && fields.size() != 3)
                throw std::invalid_argument("measure file line " + std::to_string(lineno) +
                                            ": expected 2 or 3 columns, got " +
                                            std::to_string(fields.size()));
            want_columns = static_cast<int>(fields.size());
        }
        if (static_cast<int>(fields.size()) != want_columns)
            throw std::invalid_argument("measure file line " + std::to_string(lineno) +
                                        ": expected " + std::to_string(want_columns) +
                                        " columns, got " + std::to_string(fields.size()));
        try {
            const double mass = want_columns == 3 ? fields[2] : 1.0;
            atoms.push_back({PlanarPoint(fields[0], fields[1]), mass});
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("measure file line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return PersistenceMeasure(std::move(atoms));
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    return in;
}

}  // namespace

PersistenceMeasure load_measure(std::istream& in) { return load_with_columns(in, 3); }
PersistenceMeasure load_diagram(std::istream& in) { return load_with_columns(in, 2); }
PersistenceMeasure load_measure_auto(std::istream& in) { return load_with_columns(in, 0); }

PersistenceMeasure load_measure_file(const std::string& path) {
    auto in = open_or_throw(path);
    return load_measure(in);
}
PersistenceMeasure load_diagram_file(const std::string& path) {
    auto in = open_or_throw(path);
    return load_diagram(in);
}
PersistenceMeasure load_measure_auto_file(const std::string& path) {
    auto in = open_or_throw(path);
    return load_measure_auto(in);
}

void save_measure(std::ostream& out, const PersistenceMeasure& mu) {
    for (const auto& a : mu.atoms())
        out << format_double(a.point.birth) << ' ' << format_double(a.point.death) << ' '
            << format_double(a.mass) << '\n';
}

std::string format_double(double x) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

}  // namespace pmot
