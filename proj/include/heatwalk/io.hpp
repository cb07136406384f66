#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatwalk/boundary.hpp"
#include "heatwalk/charfn.hpp"
#include "heatwalk/numeric.hpp"
#include "heatwalk/solver.hpp"
#include "heatwalk/spectral.hpp"
#include "heatwalk/walk.hpp"

namespace heatwalk {

// Shortest decimal that round-trips a double exactly.
inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    double back = 0.0;
    std::sscanf(buf, "%lg", &back);
    if (back == value) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, value);
            std::sscanf(shorter, "%lg", &back);
            if (back == value) return shorter;
        }
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Datum files: CSV with header `y,c_re,c_im` (one atom per row, LF) and a
// JSON array of {y, re, im}. Both round-trip losslessly at double precision.
// ---------------------------------------------------------------------------

inline void write_datum_csv(std::ostream& os, const Datum& d) {
    os << "y,c_re,c_im\n";
    for (const Atom& a : d.measure.atoms())
        os << format_double(a.y) << ',' << format_double(a.c.real()) << ','
           << format_double(a.c.imag()) << '\n';
}

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    return fields;
}

inline double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": cannot parse number '" + s + "'");
    }
}

}  // namespace detail

inline Datum read_datum_csv(std::istream& is) {
    std::string line;
    std::vector<Atom> atoms;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "y,c_re,c_im")
                throw std::invalid_argument(
                    "read_datum_csv: expected header 'y,c_re,c_im', got '" + line +
                    "'");
            header_seen = true;
            continue;
        }
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 3)
            throw std::invalid_argument("read_datum_csv: expected 3 fields per row");
        atoms.push_back(Atom{detail::parse_double(fields[0], "read_datum_csv"),
                             Complex{detail::parse_double(fields[1], "read_datum_csv"),
                                     detail::parse_double(fields[2], "read_datum_csv")}});
    }
    if (!header_seen)
        throw std::invalid_argument("read_datum_csv: missing header row");
    return Datum{AtomicMeasure(std::move(atoms))};
}

inline void write_datum_json(std::ostream& os, const Datum& d) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Atom& a : d.measure.atoms())
        arr.push_back({{"y", a.y}, {"re", a.c.real()}, {"im", a.c.imag()}});
    os << arr.dump(2) << '\n';
}

inline Datum read_datum_json(std::istream& is) {
    nlohmann::json arr = nlohmann::json::parse(is);
    if (!arr.is_array())
        throw std::invalid_argument("read_datum_json: expected a JSON array");
    std::vector<Atom> atoms;
    for (const auto& item : arr)
        atoms.push_back(Atom{item.at("y").get<double>(),
                             Complex{item.at("re").get<double>(),
                                     item.at("im").get<double>()}});
    return Datum{AtomicMeasure(std::move(atoms))};
}

// ---------------------------------------------------------------------------
// Boundary datum files: the Datum CSV preceded by `# bc=<kind> L=<value>`.
// ---------------------------------------------------------------------------

inline void write_boundary_datum_csv(std::ostream& os, const BoundaryDatum& bd) {
    os << "# bc=" << to_string(bd.bc);
    if (boundary_kind_needs_length(bd.bc)) os << " L=" << format_double(bd.L);
    os << '\n';
    write_datum_csv(os, bd.base);
}

inline BoundaryDatum read_boundary_datum_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("read_boundary_datum_csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# bc=", 0) != 0)
        throw std::invalid_argument(
            "read_boundary_datum_csv: expected leading '# bc=<kind> [L=<value>]'");
    std::istringstream head(line.substr(2));
    std::string token;
    std::string kind_str;
    double L = 0.0;
    while (head >> token) {
        if (token.rfind("bc=", 0) == 0)
            kind_str = token.substr(3);
        else if (token.rfind("L=", 0) == 0)
            L = detail::parse_double(token.substr(2), "read_boundary_datum_csv");
        else
            throw std::invalid_argument(
                "read_boundary_datum_csv: unknown header token '" + token + "'");
    }
    const BoundaryKind kind = boundary_kind_from_string(kind_str);
    Datum base = read_datum_csv(is);
    return make_boundary_datum(std::move(base), kind, L);
}

// ---------------------------------------------------------------------------
// Tabular exports.
// ---------------------------------------------------------------------------

// Path trace rows `step,t,re,im` (step is the signed clock floor(n t)).
inline void write_path_csv(std::ostream& os, const PathSample& path) {
    os << "step,t,re,im\n";
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        const long long steps = floor_steps(path.n, path.times[i]);
        os << (path.times[i] < 0.0 ? -steps : steps) << ','
           << format_double(path.times[i]) << ','
           << format_double(path.values[i].real()) << ','
           << format_double(path.values[i].imag()) << '\n';
    }
}

// Convergence table of psi_n(lambda) against the stable limit:
// `n,lambda_re,lambda_im,err_re,err_im,n_times_err_abs`.
inline void write_convergence_table_csv(std::ostream& os, const ModelParams& params,
                                        Complex lambda,
                                        const std::vector<long long>& n_grid) {
    os << "n,lambda_re,lambda_im,err_re,err_im,n_times_err_abs\n";
    const Complex limit = limit_char(params, 1.0, lambda);
    for (long long n : n_grid) {
        const Complex err = char_S_scaled(params, n, lambda) - limit;
        os << n << ',' << format_double(lambda.real()) << ','
           << format_double(lambda.imag()) << ',' << format_double(err.real()) << ','
           << format_double(err.imag()) << ','
           << format_double(static_cast<double>(n) * std::abs(err)) << '\n';
    }
}

// Solver results `x,u_re,u_im,un_re,un_im,abs_err[,stderr]`: u is the
// spectral oracle, un the requested approximation.
inline void write_solution_csv(std::ostream& os, const std::vector<double>& x_grid,
                               const std::vector<Complex>& oracle,
                               const SolveResult& result) {
    const bool with_stderr = !result.std_errors.empty();
    os << "x,u_re,u_im,un_re,un_im,abs_err";
    if (with_stderr) os << ",stderr";
    os << '\n';
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        os << format_double(x_grid[i]) << ',' << format_double(oracle[i].real())
           << ',' << format_double(oracle[i].imag()) << ','
           << format_double(result.values[i].real()) << ','
           << format_double(result.values[i].imag()) << ','
           << format_double(std::abs(result.values[i] - oracle[i]));
        if (with_stderr) os << ',' << format_double(result.std_errors[i]);
        os << '\n';
    }
}

inline nlohmann::json convergence_report_json(const ConvergenceReport& report) {
    nlohmann::json doc;
    doc["n_grid"] = report.n_grid;
    doc["sup_errors"] = report.sup_errors;
    doc["slope"] = report.slope;
    doc["fit_residual"] = report.fit_residual;
    doc["bound_curve"] = report.bound_curve;
    doc["bound_satisfied"] = report.bound_satisfied;
    doc["threshold_n"] = report.threshold_n;
    doc["c_of_t"] = report.c_of_t;
    return doc;
}

// File-path conveniences.

inline Datum load_datum(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open datum file: " + path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        return read_datum_json(is);
    return read_datum_csv(is);
}

inline void save_datum(const std::string& path, const Datum& d) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot write datum file: " + path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        write_datum_json(os, d);
    else
        write_datum_csv(os, d);
}

}  // namespace heatwalk
