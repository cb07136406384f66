// Command-line driver for the heatwalk library: walk simulation and exact
// enumeration, CLT rate tables, moment tables, PDE solving on the line and
// with boundary conditions, and convergence studies. Every subcommand is a
// thin shell over library calls; outputs carry a header block with the tool
// version, the full configuration, and the seed, so identical configurations
// produce identical bytes.
//
// Exit codes: 0 success, 1 numerical range/resource errors, 2 usage errors.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatwalk/heatwalk.hpp"

namespace hw = heatwalk;
using json = nlohmann::json;

namespace {

// --------------------------------------------------------------------------
// JSON config files: a nested object mirroring subcommands and long flags,
// e.g. {"walk": {"sample": {"order": 5, "alpha": "1,0"}}}. Command-line
// flags override config values (CLI11 semantics).
// --------------------------------------------------------------------------
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::parse_error& e) {
            throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        descend(j, {}, items);
        return items;
    }

private:
    static std::string scalar_to_string(const json& value) {
        if (value.is_string()) return value.get<std::string>();
        if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
        return value.dump();
    }

    static void descend(const json& node, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        if (!node.is_object())
            throw CLI::FileError("config must be a JSON object");
        for (const auto& [key, value] : node.items()) {
            if (value.is_object()) {
                auto deeper = parents;
                deeper.push_back(key);
                descend(value, deeper, out);
            } else {
                CLI::ConfigItem item;
                item.parents = parents;
                item.name = key;
                if (value.is_array())
                    for (const auto& v : value) item.inputs.push_back(scalar_to_string(v));
                else
                    item.inputs.push_back(scalar_to_string(value));
                out.push_back(item);
            }
        }
    }
};

// --------------------------------------------------------------------------
// Flag parsing helpers.
// --------------------------------------------------------------------------

hw::Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return hw::Complex{std::stod(text), 0.0};
        return hw::Complex{std::stod(text.substr(0, comma)),
                           std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected a complex value as re,im: " + text);
    }
}

std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') != std::string::npos) {
        std::istringstream is(text);
        std::string lo_s, hi_s, count_s;
        if (!std::getline(is, lo_s, ':') || !std::getline(is, hi_s, ':') ||
            !std::getline(is, count_s))
            throw CLI::ValidationError("grid spec must be lo:hi:count");
        const double lo = std::stod(lo_s);
        const double hi = std::stod(hi_s);
        const int count = std::stoi(count_s);
        if (count < 1 || (count == 1 && lo != hi))
            throw CLI::ValidationError("grid count must be >= 1");
        std::vector<double> grid;
        for (int i = 0; i < count; ++i)
            grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        return grid;
    }
    std::vector<double> grid;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) grid.push_back(std::stod(item));
    if (grid.empty()) throw CLI::ValidationError("grid spec is empty");
    return grid;
}

std::vector<long long> parse_int_list(const std::string& text) {
    std::vector<long long> values;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) values.push_back(std::stoll(item));
    if (values.empty()) throw CLI::ValidationError("integer list is empty");
    return values;
}

std::string complex_to_flag(hw::Complex z) {
    return hw::format_double(z.real()) + "," + hw::format_double(z.imag());
}

// --------------------------------------------------------------------------
// Output plumbing.
// --------------------------------------------------------------------------

struct Output {
    std::ofstream file;
    std::ostream* stream = nullptr;

    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") {
            stream = &std::cout;
            return;
        }
        file.open(path, std::ios::binary);  // LF line endings on all platforms
        if (!file) throw CLI::ValidationError("cannot open output file: " + path);
        stream = &file;
    }

    std::ostream& os() { return *stream; }
};

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void write_header(std::ostream& os, const std::string& command,
                  const ConfigEcho& config, const hw::ModelParams* params) {
    os << "# heatwalk " << hw::kVersion << '\n';
    os << "# command=" << command << '\n';
    for (const auto& [key, value] : config) os << "# " << key << '=' << value << '\n';
    if (params != nullptr && params->outside_paper_scope())
        os << "# note=order 2 lies outside the walk construction's N > 2 scope "
              "(classical-CLT cross-check)\n";
}

json header_json(const std::string& command, const ConfigEcho& config,
                 const hw::ModelParams* params) {
    json meta;
    meta["tool"] = std::string("heatwalk ") + hw::kVersion;
    meta["command"] = command;
    for (const auto& [key, value] : config) meta[key] = value;
    if (params != nullptr && params->outside_paper_scope())
        meta["note"] =
            "order 2 lies outside the walk construction's N > 2 scope "
            "(classical-CLT cross-check)";
    return meta;
}

std::string fd(double v) { return hw::format_double(v); }

// --------------------------------------------------------------------------
// Subcommand state.
// --------------------------------------------------------------------------

struct CommonOpts {
    int order = 3;
    std::string alpha = "1,0";
    std::string out = "-";
    std::string format = "csv";
    std::uint64_t seed = 0;
    int workers = 1;

    hw::ModelParams params() const { return {order, parse_complex(alpha)}; }
};

int run_walk_sample(const CommonOpts& common, long long n, double t,
                    long long replicas) {
    const hw::ModelParams params = common.params();
    const hw::StepDistribution step(params);
    Output output(common.out);
    const ConfigEcho echo{{"order", std::to_string(common.order)},
                          {"alpha", complex_to_flag(params.alpha)},
                          {"n", std::to_string(n)},
                          {"t", fd(t)},
                          {"replicas", std::to_string(replicas)},
                          {"seed", std::to_string(common.seed)}};
    write_header(output.os(), "walk sample", echo, &params);
    output.os() << "replica,step,re,im\n";
    const long long steps = hw::floor_steps(n, t);
    for (long long r = 0; r < replicas; ++r) {
        hw::Rng rng = hw::Rng::substream(common.seed, static_cast<std::uint64_t>(r));
        hw::Complex pos{0.0, 0.0};
        output.os() << r << ",0," << fd(pos.real()) << ',' << fd(pos.imag()) << '\n';
        for (long long s = 1; s <= steps; ++s) {
            pos += step.sample(rng).value;
            output.os() << r << ',' << s << ',' << fd(pos.real()) << ','
                        << fd(pos.imag()) << '\n';
        }
    }
    return 0;
}

int run_walk_dist(const CommonOpts& common, long long n) {
    const hw::ModelParams params = common.params();
    const auto dist = hw::enumerate_distribution(params, n);
    Output output(common.out);
    const ConfigEcho echo{{"order", std::to_string(common.order)},
                          {"alpha", complex_to_flag(params.alpha)},
                          {"n", std::to_string(n)}};
    const double total = hw::to_double(dist.total());
    if (common.format == "json") {
        json doc;
        doc["meta"] = header_json("walk dist", echo, &params);
        doc["total"] = dist.total().str();
        json rows = json::array();
        for (const auto& [point, count] : dist.entries()) {
            const hw::Complex z = point.to_complex(params);
            rows.push_back({{"point", point.to_string()},
                            {"re", z.real()},
                            {"im", z.imag()},
                            {"count", count.str()},
                            {"prob", hw::to_double(count) / total}});
        }
        doc["entries"] = rows;
        output.os() << doc.dump(2) << '\n';
        return 0;
    }
    write_header(output.os(), "walk dist", echo, &params);
    output.os() << "# total=" << dist.total().str() << '\n';
    output.os() << "point,re,im,count,prob\n";
    for (const auto& [point, count] : dist.entries()) {
        const hw::Complex z = point.to_complex(params);
        output.os() << point.to_string() << ',' << fd(z.real()) << ',' << fd(z.imag())
                    << ',' << count.str() << ',' << fd(hw::to_double(count) / total)
                    << '\n';
    }
    return 0;
}

int run_walk_returns(const CommonOpts& common, long long m_max) {
    const hw::ModelParams params = common.params();
    Output output(common.out);
    const ConfigEcho echo{{"order", std::to_string(common.order)},
                          {"alpha", complex_to_flag(params.alpha)},
                          {"m-max", std::to_string(m_max)}};

    struct Row {
        long long m;
        long long steps;
        std::string numerator;
        std::string denominator;
        double value;
        std::optional<double> stirling;
    };
    std::vector<Row> rows;
    if (hw::is_prime(common.order)) {
        for (long long m = 1; m <= m_max; ++m) {
            const hw::BigRational p = hw::return_probability_closed(params, m);
            rows.push_back(Row{m, common.order * m,
                               boost::multiprecision::numerator(p).str(),
                               boost::multiprecision::denominator(p).str(),
                               hw::to_double(p), hw::return_asymptote(params, m)});
        }
    } else {
        // Composite order: the exact enumeration is the oracle; no Stirling
        // column since the closed form does not apply.
        const auto report =
            hw::recurrence_diagnostic(params, std::max<long long>(m_max, 10));
        for (long long m = 1; m <= m_max; ++m) {
            const std::size_t i = static_cast<std::size_t>(m - 1);
            const hw::BigRational& p = report.exact_probabilities[i];
            rows.push_back(Row{m, common.order * m,
                               boost::multiprecision::numerator(p).str(),
                               boost::multiprecision::denominator(p).str(),
                               hw::to_double(p), std::nullopt});
        }
    }

    if (common.format == "json") {
        json doc;
        doc["meta"] = header_json("walk returns", echo, &params);
        json arr = json::array();
        for (const Row& r : rows) {
            json item{{"m", r.m},
                      {"steps", r.steps},
                      {"probability", r.value}};
            if (!r.numerator.empty()) {
                item["numerator"] = r.numerator;
                item["denominator"] = r.denominator;
            }
            if (r.stirling) item["stirling"] = *r.stirling;
            arr.push_back(item);
        }
        doc["returns"] = arr;
        output.os() << doc.dump(2) << '\n';
        return 0;
    }
    write_header(output.os(), "walk returns", echo, &params);
    output.os() << "m,steps,numerator,denominator,probability,stirling\n";
    for (const Row& r : rows) {
        output.os() << r.m << ',' << r.steps << ',' << r.numerator << ','
                    << r.denominator << ',' << fd(r.value) << ',';
        if (r.stirling) output.os() << fd(*r.stirling);
        output.os() << '\n';
    }
    return 0;
}

int run_walk_stats(const CommonOpts& common, double epsilon, long long n_max,
                   long long m_max, long long replicas,
                   const std::string& escape_n) {
    const hw::ModelParams params = common.params();
    const auto recurrence = hw::recurrence_diagnostic(params, m_max);
    const auto neighborhood =
        hw::neighborhood_visit_stats(params, epsilon, n_max, replicas, common.seed);
    std::vector<hw::EscapeEstimate> escapes;
    const auto escape_grid = parse_int_list(escape_n);
    for (long long n : escape_grid)
        escapes.push_back(
            hw::escape_probability(params, n, epsilon, replicas, common.seed));

    Output output(common.out);
    const ConfigEcho echo{{"order", std::to_string(common.order)},
                          {"alpha", complex_to_flag(params.alpha)},
                          {"epsilon", fd(epsilon)},
                          {"n-max", std::to_string(n_max)},
                          {"m-max", std::to_string(m_max)},
                          {"replicas", std::to_string(replicas)},
                          {"escape-n", escape_n},
                          {"seed", std::to_string(common.seed)}};

    if (common.format == "json") {
        json doc;
        doc["meta"] = header_json("walk stats", echo, &params);
        doc["recurrence"] = {{"m_max", m_max},
                             {"decay_exponent", recurrence.decay_exponent},
                             {"fit_residual", recurrence.fit_residual},
                             {"partial_sum", recurrence.partial_sums.back()},
                             {"used_enumeration", recurrence.used_enumeration}};
        json nb;
        nb["checkpoints"] = neighborhood.checkpoints;
        nb["mean_visit_counts"] = neighborhood.mean_visit_counts;
        nb["gaussian_limit_curve"] = neighborhood.gaussian_limit_curve;
        nb["gaussian_limit_value"] = neighborhood.gaussian_limit_value;
        nb["log_fit_coefficient"] = neighborhood.log_fit_coefficient;
        doc["neighborhood"] = nb;
        json esc = json::array();
        for (std::size_t i = 0; i < escapes.size(); ++i)
            esc.push_back({{"n", escape_grid[i]},
                           {"estimate", escapes[i].estimate},
                           {"std_error", escapes[i].std_error},
                           {"comparator", escapes[i].comparator}});
        doc["escape"] = esc;
        output.os() << doc.dump(2) << '\n';
        return 0;
    }
    write_header(output.os(), "walk stats", echo, &params);
    output.os() << "metric,n,value\n";
    output.os() << "recurrence_decay_exponent,," << fd(recurrence.decay_exponent)
                << '\n';
    output.os() << "recurrence_partial_sum," << m_max << ','
                << fd(recurrence.partial_sums.back()) << '\n';
    for (std::size_t i = 0; i < neighborhood.checkpoints.size(); ++i) {
        output.os() << "neighborhood_visits," << neighborhood.checkpoints[i] << ','
                    << fd(neighborhood.mean_visit_counts[i]) << '\n';
        output.os() << "neighborhood_limit_curve," << neighborhood.checkpoints[i]
                    << ',' << fd(neighborhood.gaussian_limit_curve[i]) << '\n';
    }
    output.os() << "neighborhood_log_fit,," << fd(neighborhood.log_fit_coefficient)
                << '\n';
    for (std::size_t i = 0; i < escapes.size(); ++i) {
        output.os() << "escape_estimate," << escape_grid[i] << ','
                    << fd(escapes[i].estimate) << '\n';
        output.os() << "escape_comparator," << escape_grid[i] << ','
                    << fd(escapes[i].comparator) << '\n';
    }
    return 0;
}

int run_clt_check(const CommonOpts& common, const std::string& lambda_s,
                  const std::string& n_grid_s) {
    const hw::ModelParams params = common.params();
    const hw::Complex lambda = parse_complex(lambda_s);
    const auto n_grid = parse_int_list(n_grid_s);
    if (!std::is_sorted(n_grid.begin(), n_grid.end()))
        throw CLI::ValidationError("--n-grid must be increasing");

    Output output(common.out);
    const ConfigEcho echo{{"order", std::to_string(common.order)},
                          {"alpha", complex_to_flag(params.alpha)},
                          {"lambda", complex_to_flag(lambda)},
                          {"n-grid", n_grid_s}};
    const hw::Complex limit = hw::limit_char(params, 1.0, lambda);
    const double predicted = std::abs(hw::clt_error_constant(params, lambda));

    if (common.format == "json") {
        json doc;
        doc["meta"] = header_json("clt check", echo, &params);
        doc["limit"] = {{"re", limit.real()}, {"im", limit.imag()}};
        doc["predicted_constant_abs"] = predicted;
        json rows = json::array();
        for (long long n : n_grid) {
            const hw::Complex psi = hw::char_S_scaled(params, n, lambda);
            const hw::Complex err = psi - limit;
            rows.push_back({{"n", n},
                            {"psi_re", psi.real()},
                            {"psi_im", psi.imag()},
                            {"err_re", err.real()},
                            {"err_im", err.imag()},
                            {"n_times_err_abs", static_cast<double>(n) * std::abs(err)}});
        }
        doc["rows"] = rows;
        output.os() << doc.dump(2) << '\n';
        return 0;
    }
    write_header(output.os(), "clt check", echo, &params);
    output.os() << "n,lambda_re,lambda_im,err_re,err_im,n_times_err_abs,"
                   "psi_re,psi_im,limit_re,limit_im,predicted_constant_abs\n";
    for (long long n : n_grid) {
        const hw::Complex psi = hw::char_S_scaled(params, n, lambda);
        const hw::Complex err = psi - limit;
        output.os() << n << ',' << fd(lambda.real()) << ',' << fd(lambda.imag()) << ','
                    << fd(err.real()) << ',' << fd(err.imag()) << ','
                    << fd(static_cast<double>(n) * std::abs(err)) << ','
                    << fd(psi.real()) << ',' << fd(psi.imag()) << ','
                    << fd(limit.real()) << ',' << fd(limit.imag()) << ','
                    << fd(predicted) << '\n';
    }
    return 0;
}

int run_moments(const CommonOpts& common, long long n, long long k_max) {
    const hw::ModelParams params = common.params();
    if (k_max >= n)
        throw CLI::ValidationError("moments: requires n > k-max");
    Output output(common.out);
    const ConfigEcho echo{{"order", std::to_string(common.order)},
                          {"alpha", complex_to_flag(params.alpha)},
                          {"n", std::to_string(n)},
                          {"k-max", std::to_string(k_max)}};

    if (common.format == "json") {
        json doc;
        doc["meta"] = header_json("moments", echo, &params);
        json rows = json::array();
        for (long long k = 1; k <= k_max; ++k) {
            const hw::Complex fdb = hw::moment_faadibruno(params, n, k);
            const hw::Complex lim = hw::moment_limit(params, k);
            rows.push_back({{"k", k},
                            {"finite_re", fdb.real()},
                            {"finite_im", fdb.imag()},
                            {"limit_re", lim.real()},
                            {"limit_im", lim.imag()},
                            {"abs_diff", std::abs(fdb - lim)}});
        }
        doc["rows"] = rows;
        output.os() << doc.dump(2) << '\n';
        return 0;
    }
    write_header(output.os(), "moments", echo, &params);
    output.os() << "k,finite_re,finite_im,limit_re,limit_im,abs_diff\n";
    for (long long k = 1; k <= k_max; ++k) {
        const hw::Complex fdb = hw::moment_faadibruno(params, n, k);
        const hw::Complex lim = hw::moment_limit(params, k);
        output.os() << k << ',' << fd(fdb.real()) << ',' << fd(fdb.imag()) << ','
                    << fd(lim.real()) << ',' << fd(lim.imag()) << ','
                    << fd(std::abs(fdb - lim)) << '\n';
    }
    return 0;
}

hw::SolveMethod parse_method(const std::string& name) {
    if (name == "spectral") return hw::SolveMethod::spectral;
    if (name == "walk-exact") return hw::SolveMethod::walk_exact;
    if (name == "walk-mc") return hw::SolveMethod::walk_mc;
    throw CLI::ValidationError("unknown method: " + name);
}

json solution_rows_json(const std::vector<double>& grid,
                        const std::vector<hw::Complex>& oracle,
                        const hw::SolveResult& result) {
    json rows = json::array();
    const bool with_stderr = !result.std_errors.empty();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        json row{{"x", grid[i]},
                 {"u_re", oracle[i].real()},
                 {"u_im", oracle[i].imag()},
                 {"un_re", result.values[i].real()},
                 {"un_im", result.values[i].imag()},
                 {"abs_err", std::abs(result.values[i] - oracle[i])}};
        if (with_stderr) row["stderr"] = result.std_errors[i];
        rows.push_back(row);
    }
    return rows;
}

int run_solve(const CommonOpts& common, const std::string& datum_path, double t,
              double t0, const std::string& grid_s, long long n,
              const std::string& method_s, long long replicas) {
    const hw::ModelParams params = common.params();
    const hw::Datum datum = hw::load_datum(datum_path);
    const auto grid = parse_grid(grid_s);
    const hw::SolveMethod method = parse_method(method_s);

    hw::SolveRequest req{params,  datum,    t,           t0,   grid, n,
                         method, replicas, common.seed, common.workers};
    const auto result = hw::solve(req);
    std::vector<hw::Complex> oracle;
    for (double x : grid)
        oracle.push_back(hw::exact_solution(params, datum, t - t0, x));

    Output output(common.out);
    const ConfigEcho echo{{"order", std::to_string(common.order)},
                          {"alpha", complex_to_flag(params.alpha)},
                          {"datum", datum_path},
                          {"t", fd(t)},
                          {"t0", fd(t0)},
                          {"x-grid", grid_s},
                          {"n", std::to_string(n)},
                          {"method", method_s},
                          {"replicas", std::to_string(replicas)},
                          {"seed", std::to_string(common.seed)}};
    if (common.format == "json") {
        json doc;
        doc["meta"] = header_json("solve", echo, &params);
        doc["rows"] = solution_rows_json(grid, oracle, result);
        output.os() << doc.dump(2) << '\n';
        return 0;
    }
    write_header(output.os(), "solve", echo, &params);
    hw::write_solution_csv(output.os(), grid, oracle, result);
    return 0;
}

int run_convergence(const CommonOpts& common, const std::string& datum_path,
                    double t, const std::string& grid_s,
                    const std::string& n_grid_s) {
    const hw::ModelParams params = common.params();
    const hw::Datum datum = hw::load_datum(datum_path);
    const auto grid = parse_grid(grid_s);
    const auto n_grid = parse_int_list(n_grid_s);
    const auto report = hw::convergence_study(params, datum, t, grid, n_grid);

    Output output(common.out);
    const ConfigEcho echo{{"order", std::to_string(common.order)},
                          {"alpha", complex_to_flag(params.alpha)},
                          {"datum", datum_path},
                          {"t", fd(t)},
                          {"x-grid", grid_s},
                          {"n-grid", n_grid_s}};
    if (common.format == "json") {
        json doc = hw::convergence_report_json(report);
        doc["meta"] = header_json("convergence", echo, &params);
        output.os() << doc.dump(2) << '\n';
        return 0;
    }
    write_header(output.os(), "convergence", echo, &params);
    output.os() << "# slope=" << fd(report.slope) << '\n';
    output.os() << "# bound_satisfied=" << (report.bound_satisfied ? "true" : "false")
                << '\n';
    output.os() << "# threshold_n=" << report.threshold_n << '\n';
    output.os() << "n,sup_error,bound\n";
    for (std::size_t i = 0; i < report.n_grid.size(); ++i)
        output.os() << report.n_grid[i] << ',' << fd(report.sup_errors[i]) << ','
                    << fd(report.bound_curve[i]) << '\n';
    return 0;
}

std::vector<double> parse_coeff_list(const std::string& text) {
    std::vector<double> coeffs;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) coeffs.push_back(std::stod(item));
    if (coeffs.empty()) throw CLI::ValidationError("empty coefficient list");
    return coeffs;
}

// Build a boundary datum from sine/cosine coefficients against the lattice
// of the requested boundary condition: k pi / L for interval Dirichlet and
// Neumann problems, 2 pi k / L Fourier modes for the periodic problem, and
// integer frequencies for the half-line extensions.
hw::BoundaryDatum series_boundary_datum(hw::BoundaryKind kind, double L,
                                        const std::string& sine_s,
                                        const std::string& cosine_s) {
    const bool is_sine = !sine_s.empty();
    const auto coeffs = parse_coeff_list(is_sine ? sine_s : cosine_s);
    switch (kind) {
        case hw::BoundaryKind::dirichlet_interval:
            if (!is_sine)
                throw CLI::ValidationError("Dirichlet data need --sine coefficients");
            return hw::sine_series(L, coeffs);
        case hw::BoundaryKind::neumann_interval:
            if (is_sine)
                throw CLI::ValidationError("Neumann data need --cosine coefficients");
            return hw::cosine_series(L, coeffs);
        case hw::BoundaryKind::periodic: {
            std::vector<hw::Atom> atoms;
            for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
                const std::size_t k = is_sine ? idx + 1 : idx;
                const double c = coeffs[idx];
                if (c == 0.0) continue;
                const double y = 2.0 * hw::kPi * static_cast<double>(k) / L;
                if (k == 0) {
                    atoms.push_back(hw::Atom{0.0, hw::Complex{c, 0.0}});
                } else if (is_sine) {
                    atoms.push_back(hw::Atom{y, hw::Complex{0.0, -c / 2.0}});
                    atoms.push_back(hw::Atom{-y, hw::Complex{0.0, c / 2.0}});
                } else {
                    atoms.push_back(hw::Atom{y, hw::Complex{c / 2.0, 0.0}});
                    atoms.push_back(hw::Atom{-y, hw::Complex{c / 2.0, 0.0}});
                }
            }
            return hw::make_boundary_datum(
                hw::Datum{hw::AtomicMeasure(std::move(atoms))},
                hw::BoundaryKind::periodic, L);
        }
        case hw::BoundaryKind::dirichlet_halfline: {
            if (!is_sine)
                throw CLI::ValidationError("Dirichlet data need --sine coefficients");
            hw::HalfLineSeries series{hw::HalfLineSeries::Kind::sine, {}, 0.0};
            for (std::size_t k = 0; k < coeffs.size(); ++k)
                if (coeffs[k] != 0.0)
                    series.terms.emplace_back(static_cast<double>(k + 1), coeffs[k]);
            return hw::extend(series, hw::Parity::odd);
        }
        case hw::BoundaryKind::neumann_halfline: {
            if (is_sine)
                throw CLI::ValidationError("Neumann data need --cosine coefficients");
            hw::HalfLineSeries series{hw::HalfLineSeries::Kind::cosine, {}, coeffs[0]};
            for (std::size_t k = 1; k < coeffs.size(); ++k)
                if (coeffs[k] != 0.0)
                    series.terms.emplace_back(static_cast<double>(k), coeffs[k]);
            return hw::extend(series, hw::Parity::even);
        }
    }
    throw std::logic_error("series_boundary_datum");
}

int run_boundary(const CommonOpts& common, const std::string& bc_s, double L,
                 const std::string& datum_path, const std::string& sine_s,
                 const std::string& cosine_s, double t, const std::string& grid_s,
                 long long n, const std::string& method_s, long long replicas) {
    const hw::ModelParams params = common.params();

    hw::BoundaryDatum bd;
    if (!datum_path.empty()) {
        std::ifstream is(datum_path);
        if (!is) throw CLI::ValidationError("cannot open datum file: " + datum_path);
        bd = hw::read_boundary_datum_csv(is);
        if (!bc_s.empty()) {
            // An explicit kind must hold for the loaded measure too.
            const hw::BoundaryKind want = hw::boundary_kind_from_string(bc_s);
            if (want != bd.bc)
                bd = hw::make_boundary_datum(
                    bd.base, want, hw::boundary_kind_needs_length(want) ? L : 0.0);
        }
    } else if (!sine_s.empty() || !cosine_s.empty()) {
        const hw::BoundaryKind kind =
            bc_s.empty() ? (!sine_s.empty() ? hw::BoundaryKind::dirichlet_interval
                                            : hw::BoundaryKind::neumann_interval)
                         : hw::boundary_kind_from_string(bc_s);
        bd = series_boundary_datum(kind, L, sine_s, cosine_s);
    } else {
        throw CLI::ValidationError(
            "boundary: provide --datum, --sine, or --cosine coefficients");
    }

    const auto grid = parse_grid(grid_s);
    const hw::SolveMethod method = parse_method(method_s);
    const auto result = hw::boundary_solve(params, bd, t, grid, method, n, replicas,
                                           common.seed, common.workers);
    std::vector<hw::Complex> oracle;
    for (double x : grid)
        oracle.push_back(hw::exact_solution(params, bd.base, t, x));

    Output output(common.out);
    const ConfigEcho echo{{"order", std::to_string(common.order)},
                          {"alpha", complex_to_flag(params.alpha)},
                          {"bc", hw::to_string(bd.bc)},
                          {"L", fd(bd.L)},
                          {"datum", datum_path},
                          {"t", fd(t)},
                          {"x-grid", grid_s},
                          {"n", std::to_string(n)},
                          {"method", method_s},
                          {"replicas", std::to_string(replicas)},
                          {"seed", std::to_string(common.seed)}};
    if (common.format == "json") {
        json doc;
        doc["meta"] = header_json("boundary", echo, &params);
        doc["rows"] = solution_rows_json(grid, oracle, result);
        output.os() << doc.dump(2) << '\n';
        return 0;
    }
    write_header(output.os(), "boundary", echo, &params);
    hw::write_solution_csv(output.os(), grid, oracle, result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    // The config option lives on the root app; hoist it in front of any
    // subcommand names so `walk dist --config f.json` works as well as
    // `--config f.json walk dist`.
    std::vector<std::string> args;
    std::vector<std::string> config_args;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            config_args.push_back(arg);
            config_args.push_back(argv[++i]);
        } else if (arg.rfind("--config=", 0) == 0) {
            config_args.push_back(arg);
        } else {
            args.push_back(arg);
        }
    }
    args.insert(args.begin(), config_args.begin(), config_args.end());
    std::reverse(args.begin(), args.end());  // CLI11's vector overload wants
                                             // reversed arguments

    CLI::App app{"Random walks on the complex plane for N-th order heat-type "
                 "equations: exact walk laws, CLT rate tables, spectral and "
                 "probabilistic PDE solvers, and boundary problems."};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file mirroring the long flags");
    app.allow_config_extras(true);
    app.set_version_flag("--version", std::string("heatwalk ") + hw::kVersion);

    CommonOpts common;

    auto add_common = [&common](CLI::App* cmd, bool with_seed) {
        cmd->add_option("--order", common.order, "walk order N (>= 2)");
        cmd->add_option("--alpha", common.alpha, "complex coefficient as re,im");
        cmd->add_option("--out", common.out, "output path ('-' for stdout)");
        cmd->add_option("--format", common.format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        if (with_seed) cmd->add_option("--seed", common.seed, "64-bit RNG seed");
        cmd->add_option("--workers", common.workers, "worker threads");
    };

    int exit_code = 0;
    auto run = [&exit_code](auto&& fn) {
        exit_code = fn();
    };

    // walk ------------------------------------------------------------------
    auto* walk = app.add_subcommand("walk", "walk simulation and exact statistics");
    walk->configurable();
    walk->require_subcommand(1);

    {
        auto* sample = walk->add_subcommand("sample", "sample walk paths to CSV");
        sample->configurable();
        static long long n = 1000;
        static double t = 1.0;
        static long long replicas = 1;
        add_common(sample, true);
        sample->add_option("--n", n, "steps per unit time");
        sample->add_option("--t", t, "duration (floor(n t) steps)");
        sample->add_option("--replicas", replicas, "independent paths");
        sample->callback([&] { run([&] { return run_walk_sample(common, n, t, replicas); }); });
    }
    {
        auto* dist = walk->add_subcommand("dist", "exact law of S_n");
        dist->configurable();
        static long long n = 4;
        add_common(dist, false);
        dist->add_option("--n", n, "number of steps");
        dist->callback([&] { run([&] { return run_walk_dist(common, n); }); });
    }
    {
        auto* returns = walk->add_subcommand("returns", "return probabilities");
        returns->configurable();
        static long long m_max = 10;
        add_common(returns, false);
        returns->add_option("--m-max", m_max, "largest return index m");
        returns->callback([&] { run([&] { return run_walk_returns(common, m_max); }); });
    }
    {
        auto* stats = walk->add_subcommand(
            "stats", "recurrence diagnostic, neighborhood visits, escape estimates");
        stats->configurable();
        static double epsilon = 1.0;
        static long long n_max = 10'000;
        static long long m_max = 50;
        static long long replicas = 1000;
        static std::string escape_n = "100,1000,10000";
        add_common(stats, true);
        stats->add_option("--epsilon", epsilon, "ball radius");
        stats->add_option("--n-max", n_max, "largest walk length");
        stats->add_option("--m-max", m_max, "return indices for the diagnostic");
        stats->add_option("--replicas", replicas, "Monte Carlo replicas");
        stats->add_option("--escape-n", escape_n, "comma list of n for escape estimates");
        stats->callback([&] {
            run([&] {
                return run_walk_stats(common, epsilon, n_max, m_max, replicas,
                                      escape_n);
            });
        });
    }

    // clt ---------------------------------------------------------------------
    auto* clt = app.add_subcommand("clt", "convergence-rate checks");
    clt->configurable();
    clt->require_subcommand(1);
    {
        auto* check = clt->add_subcommand("check", "psi_n against the stable limit");
        check->configurable();
        static std::string lambda = "1,0";
        static std::string n_grid = "100,1000,10000,100000";
        add_common(check, false);
        check->add_option("--lambda", lambda, "evaluation point as re,im");
        check->add_option("--n-grid", n_grid, "increasing comma list of n");
        check->callback([&] { run([&] { return run_clt_check(common, lambda, n_grid); }); });
    }

    // moments -----------------------------------------------------------------
    {
        auto* moments = app.add_subcommand("moments", "finite-n moments vs the limit");
        moments->configurable();
        static long long n = 100;
        static long long k_max = 8;
        add_common(moments, false);
        moments->add_option("--n", n, "walk length (must exceed k-max)");
        moments->add_option("--k-max", k_max, "largest moment order");
        moments->callback([&] { run([&] { return run_moments(common, n, k_max); }); });
    }

    // solve ---------------------------------------------------------------------
    {
        auto* solve_cmd = app.add_subcommand("solve", "solve the Cauchy problem");
        solve_cmd->configurable();
        static std::string datum;
        static double t = 1.0;
        static double t0 = 0.0;
        static std::string grid = "-3.14159265358979324:3.14159265358979324:257";
        static long long n = 1000;
        static std::string method = "walk-exact";
        static long long replicas = 100'000;
        add_common(solve_cmd, true);
        solve_cmd->add_option("--datum", datum, "datum file (CSV or .json)")
            ->required();
        solve_cmd->add_option("--t", t, "solution time");
        solve_cmd->add_option("--t0", t0, "initial time");
        solve_cmd->add_option("--x-grid", grid, "lo:hi:count or comma list");
        solve_cmd->add_option("--n", n, "walk resolution");
        solve_cmd->add_option("--method", method, "spectral, walk-exact, or walk-mc");
        solve_cmd->add_option("--replicas", replicas, "Monte Carlo replicas");
        solve_cmd->callback([&] {
            run([&] {
                return run_solve(common, datum, t, t0, grid, n, method, replicas);
            });
        });
    }

    // convergence ---------------------------------------------------------------
    {
        auto* conv = app.add_subcommand("convergence", "error decay study");
        conv->configurable();
        static std::string datum;
        static double t = 1.0;
        static std::string grid = "-3.14159265358979324:3.14159265358979324:257";
        static std::string n_grid = "100,1000,10000,100000";
        add_common(conv, false);
        conv->add_option("--datum", datum, "datum file (CSV or .json)")->required();
        conv->add_option("--t", t, "solution time");
        conv->add_option("--x-grid", grid, "lo:hi:count or comma list");
        conv->add_option("--n-grid", n_grid, "increasing comma list of n");
        conv->callback([&] {
            run([&] { return run_convergence(common, datum, t, grid, n_grid); });
        });
    }

    // boundary --------------------------------------------------------------------
    {
        auto* bnd = app.add_subcommand("boundary", "boundary-value problems");
        bnd->configurable();
        static std::string bc;
        static double L = 3.14159265358979324;
        static std::string datum;
        static std::string sine;
        static std::string cosine;
        static double t = 1.0;
        static std::string grid = "0:3.14159265358979324:129";
        static long long n = 1000;
        static std::string method = "spectral";
        static long long replicas = 100'000;
        add_common(bnd, true);
        bnd->add_option("--bc", bc,
                        "dirichlet, neumann, periodic, dirichlet-halfline, "
                        "neumann-halfline");
        bnd->add_option("--L", L, "interval length");
        bnd->add_option("--datum", datum, "boundary datum file (# bc=... header)");
        bnd->add_option("--sine", sine, "sine coefficients b_1,b_2,...");
        bnd->add_option("--cosine", cosine, "cosine coefficients a_0,a_1,...");
        bnd->add_option("--t", t, "solution time");
        bnd->add_option("--x-grid", grid, "lo:hi:count or comma list");
        bnd->add_option("--n", n, "walk resolution");
        bnd->add_option("--method", method, "spectral, walk-exact, or walk-mc");
        bnd->add_option("--replicas", replicas, "Monte Carlo replicas");
        bnd->callback([&] {
            run([&] {
                return run_boundary(common, bc, L, datum, sine, cosine, t, grid, n,
                                    method, replicas);
            });
        });
    }

    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const hw::resource_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const hw::unsupported_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::range_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
