#include "epd/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "epd/errors.hpp"
#include "epd/specfun.hpp"

namespace epd::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text, const std::string& what) {
    const std::string s = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw DomainError(what + ": '" + text + "' is not a number");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string to_string(QuadScheme s) { return s == QuadScheme::TanhSinh ? "tanh-sinh" : "gauss-kronrod"; }

QuadScheme scheme_from_string(const std::string& s) {
    if (s == "tanh-sinh") return QuadScheme::TanhSinh;
    if (s == "gauss-kronrod") return QuadScheme::GaussKronrod;
    throw DomainError("unknown quadrature scheme '" + s + "' (tanh-sinh, gauss-kronrod)");
}

void reject_unknown(const json& j, const std::vector<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw DomainError(where + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw DomainError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
}

template <class T>
void read(const json& j, const char* key, T& dst, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DomainError("key '" + (where.empty() ? std::string(key) : where + "." + key) + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

double arg(const RunConfig& c, const std::string& name) {
    const auto it = c.args.find(name);
    if (it == c.args.end()) throw DomainError("eval " + c.target + ": missing argument --" + name);
    return it->second;
}

double eval_tol(const RunConfig& c) {
    const auto it = c.args.find("tol");
    return it == c.args.end() ? specfun::SeriesControl{}.tol : it->second;
}

json eval(const RunConfig& c) {
    namespace sf = specfun;
    sf::SeriesControl ctl;
    ctl.tol = eval_tol(c);
    if (!(ctl.tol > 0.0)) throw DomainError("eval: --tol must be positive");
    json r;
    r["function"] = c.target;
    const std::string& f = c.target;
    if (f == "gamma") {
        r["value"] = sf::gamma_fn(arg(c, "x"));
    } else if (f == "rgamma") {
        r["value"] = sf::rgamma(arg(c, "x"));
    } else if (f == "beta") {
        r["value"] = sf::beta_fn(arg(c, "a"), arg(c, "b"));
    } else if (f == "pochhammer") {
        r["value"] = sf::pochhammer(arg(c, "a"), static_cast<int>(arg(c, "k")));
    } else if (f == "2f1") {
        const auto h = sf::gauss_2f1(arg(c, "a"), arg(c, "b"), arg(c, "c"), arg(c, "z"), ctl);
        r["value"] = h.value;
        r["terms_used"] = h.terms_used;
        r["est_error"] = h.est_error;
    } else if (f == "f4") {
        const auto h = sf::appell_f4(arg(c, "a"), arg(c, "b"), arg(c, "c"), arg(c, "d"), arg(c, "x"), arg(c, "y"), ctl);
        r["value"] = h.value;
        r["terms_used"] = h.terms_used;
        r["est_error"] = h.est_error;
    } else if (f == "besselj") {
        r["value"] = sf::bessel_j(arg(c, "order"), arg(c, "z"));
    } else if (f == "bessely") {
        r["value"] = sf::bessel_y(arg(c, "order"), arg(c, "z"));
    } else if (f == "legendre-p") {
        r["value"] = sf::legendre_p(arg(c, "mu"), arg(c, "nu"), arg(c, "z"), ctl);
    } else if (f == "legendre-q") {
        const auto q = sf::legendre_q(arg(c, "mu"), arg(c, "nu"), arg(c, "z"), ctl);
        r["value"] = q.real();
        r["imag"] = q.imag();
    } else {
        throw DomainError("unknown function '" + f +
                          "' (gamma, rgamma, beta, pochhammer, 2f1, f4, besselj, bessely, legendre-p, legendre-q)");
    }
    return r;
}

json kernel(const RunConfig& c) {
    const double t = arg(c, "t");
    const double x = arg(c, "x");
    kernels::KernelValue v;
    if (c.target == "w") {
        v = kernels::w_kernel_r(c.params, t, x);
    } else if (c.target == "n") {
        v = kernels::n_kernel_r(c.params, t, x);
    } else if (c.target == "k") {
        v = kernels::k_kernel(c.params, t, x, arg(c, "xp"));
    } else if (c.target == "h") {
        v = kernels::h_kernel(c.params, t, x, arg(c, "xp"));
    } else {
        throw DomainError("unknown kernel '" + c.target + "' (w, n, k, h)");
    }
    json r;
    r["kernel"] = c.target;
    r["profile"] = v.profile;
    r["phase_re"] = v.phase.real();
    r["phase_im"] = v.phase.imag();
    r["region"] = kernels::to_string(v.region);
    r["boundary_adjacent"] = v.boundary_adjacent;
    return r;
}

std::vector<solver::SolutionSample> solve(const RunConfig& c) {
    solver::SolveInput in;
    in.problem = solver::problem_from_string(c.target);
    in.params = c.params;
    in.data = {parse_data(c.f), parse_data(c.g)};
    in.coeffs = {c.a, c.b};
    if (in.coeffs.a.empty()) in.coeffs.a = {0.0};
    if (in.coeffs.b.empty()) in.coeffs.b = {0.0};
    in.quad = c.quad;
    // The grid turns per-point domain errors into skipped rows, so reject bad
    // parameters before it runs.
    switch (in.problem) {
        case solver::Problem::Classical: kernels::require_classical(in.params); break;
        case solver::Problem::ClassicalModified: kernels::require_modified_classical(in.params); break;
        case solver::Problem::Radial: kernels::require_radial(in.params); break;
        case solver::Problem::RadialModified: kernels::require_modified_radial(in.params); break;
        case solver::Problem::RadialSeries:
            if (!(in.params.mu > 0.0 && in.params.mu < 1.0))
                throw DomainError("radial-series requires 0 < mu < 1, got " + format_double(in.params.mu));
            in.coeffs.validate();
            break;
    }
    if (c.grid.empty()) throw DomainError("solve: --grid is required");
    auto grid = parse_grid(c.grid);
    grid.threads = c.threads;
    spdlog::info("solve {} mu={} nu={} n={} q={} grid '{}'", c.target, c.params.mu, c.params.nu, c.params.n,
                 c.params.q, c.grid);
    auto samples = solver::solve_grid(in, grid);
    for (const auto& s : samples)
        if (s.skipped) spdlog::debug("skipped (t={}, x={}): {}", s.t, s.x.empty() ? 0.0 : s.x[0], s.note);
    return samples;
}

verify::VerificationReport negative_control(const std::string& name, double residual, double floor) {
    verify::VerificationReport r;
    r.name = name;
    r.tolerance = 0.0;
    r.notes.push_back("residual " + format_double(residual) + " must be at least " + format_double(floor));
    if (!(residual >= floor)) r.failed_conditions.push_back("negative control passed: residual below " + format_double(floor));
    return r.finalize();
}

std::vector<verify::VerificationReport> initial_condition_suite() {
    using namespace solver;
    const std::vector<double> fc{0.3, -0.5, 0.8, 0.2}, gc{-0.4, 0.6, 0.1, -0.3};
    const auto f = DataFunction::polynomial(fc), g = DataFunction::polynomial(gc);
    const auto zero = [](double) { return 0.0; };
    const std::vector<double> xs{0.5, 1.0, 1.7}, ts{4e-3, 2e-3, 1e-3};
    std::vector<verify::VerificationReport> out;
    for (double mu : {0.1, 0.25, 0.4})
        for (double nu : {0.0, 0.5, 2.0}) {
            EPDParameters p;
            p.mu = mu;
            p.nu = nu;
            const CauchyData df{f, DataFunction::zero()}, dg{DataFunction::zero(), g};
            const SeriesCoefficients sf{fc, {0.0}}, sg{{0.0}, gc};
            const verify::Field qf = [&](double t, double x) { return solve_radial(p, df, t, x).value; };
            const verify::Field qg = [&](double t, double x) { return solve_radial(p, dg, t, x).value; };
            const verify::Field rf = [&](double t, double x) { return solve_radial_series(p, sf, t, x).value; };
            const verify::Field rg = [&](double t, double x) { return solve_radial_series(p, sg, t, x).value; };
            const std::string tag = " mu=" + format_double(mu) + " nu=" + format_double(nu);
            for (const auto& [name, uf, ug] : {std::tuple{"radial", qf, qg}, std::tuple{"radial-series", rf, rg}}) {
                auto v = verify::check_initial_conditions(uf, [&](double x) { return f(x); }, zero, mu, xs, ts).value;
                auto d = verify::check_initial_conditions(ug, zero, [&](double x) { return g(x); }, mu, xs, ts).derivative;
                v.name = std::string(name) + " initial value (second datum 0)" + tag;
                d.name = std::string(name) + " weighted derivative (first datum 0)" + tag;
                out.push_back(std::move(v));
                out.push_back(std::move(d));
            }
        }
    return out;
}

void append(std::vector<verify::VerificationReport>& dst, std::vector<verify::VerificationReport> src) {
    for (auto& r : src) dst.push_back(std::move(r));
}

void write_output(const RunConfig& c, const std::string& body, std::ostream& out) {
    if (c.output.empty()) {
        out << body;
        return;
    }
    std::ofstream os(c.output, std::ios::binary);
    if (!os) throw DomainError("cannot open '" + c.output + "' for writing");
    os << body;
    if (!os) throw DomainError("write to '" + c.output + "' failed");
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json meta;
    meta["config"] = c.to_json();
    meta["created"] = stamp;
    meta["output"] = c.output;
    std::ofstream ms(c.output + ".meta.json");
    ms << meta.dump(2) << '\n';
    if (!ms) throw DomainError("write to '" + c.output + ".meta.json' failed");
    spdlog::info("wrote {} and its metadata sidecar", c.output);
}

std::string dump(const json& j) {
    return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

std::string to_string(Command c) {
    switch (c) {
        case Command::Eval: return "eval";
        case Command::Kernel: return "kernel";
        case Command::Solve: return "solve";
        case Command::Verify: return "verify";
    }
    return "?";
}

Command command_from_string(const std::string& s) {
    for (Command c : {Command::Eval, Command::Kernel, Command::Solve, Command::Verify})
        if (to_string(c) == s) return c;
    throw DomainError("unknown command '" + s + "' (eval, kernel, solve, verify)");
}

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

json RunConfig::to_json() const {
    json j;
    j["command"] = cli::to_string(command);
    j["target"] = target;
    j["params"] = {{"mu", params.mu}, {"nu", params.nu}, {"n", params.n}, {"q", params.q}};
    j["args"] = args;
    j["f"] = f;
    j["g"] = g;
    j["a"] = a;
    j["b"] = b;
    j["grid"] = grid;
    j["quad"] = {{"scheme", to_string(quad.scheme)},
                 {"rel_tol", quad.rel_tol},
                 {"abs_tol", quad.abs_tol},
                 {"max_subdivisions", quad.max_subdivisions},
                 {"oscillatory_partitioning", quad.oscillatory_partitioning}};
    j["threads"] = threads;
    j["output"] = output;
    j["format"] = format;
    return j;
}

RunConfig RunConfig::from_json(const json& j) {
    reject_unknown(j,
                   {"command", "target", "params", "args", "f", "g", "a", "b", "grid", "quad", "threads", "output",
                    "format"},
                   "");
    RunConfig c;
    std::string cmd = "eval";
    read(j, "command", cmd, "");
    c.command = command_from_string(cmd);
    read(j, "target", c.target, "");
    if (j.contains("params")) {
        const auto& p = j.at("params");
        reject_unknown(p, {"mu", "nu", "n", "q"}, "params");
        read(p, "mu", c.params.mu, "params");
        read(p, "nu", c.params.nu, "params");
        read(p, "n", c.params.n, "params");
        read(p, "q", c.params.q, "params");
    }
    read(j, "args", c.args, "");
    read(j, "f", c.f, "");
    read(j, "g", c.g, "");
    read(j, "a", c.a, "");
    read(j, "b", c.b, "");
    read(j, "grid", c.grid, "");
    if (j.contains("quad")) {
        const auto& q = j.at("quad");
        reject_unknown(q, {"scheme", "rel_tol", "abs_tol", "max_subdivisions", "oscillatory_partitioning"}, "quad");
        std::string scheme = to_string(c.quad.scheme);
        read(q, "scheme", scheme, "quad");
        c.quad.scheme = scheme_from_string(scheme);
        read(q, "rel_tol", c.quad.rel_tol, "quad");
        read(q, "abs_tol", c.quad.abs_tol, "quad");
        read(q, "max_subdivisions", c.quad.max_subdivisions, "quad");
        read(q, "oscillatory_partitioning", c.quad.oscillatory_partitioning, "quad");
    }
    read(j, "threads", c.threads, "");
    read(j, "output", c.output, "");
    read(j, "format", c.format, "");
    if (c.format != "csv" && c.format != "json" && c.format != "text")
        throw DomainError("key 'format': expected csv, json or text, got '" + c.format + "'");
    return c;
}

RunConfig RunConfig::parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line and column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw DomainError("config line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    return from_json(j);
}

// ---------------------------------------------------------------------------
// Literals
// ---------------------------------------------------------------------------

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& s : split(text, ',')) out.push_back(parse_number(s, "list entry"));
    return out;
}

solver::DataFunction parse_data(const std::string& literal) {
    const std::string s = trim(literal);
    if (s == "zero" || s == "0") return solver::DataFunction::zero();
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw DomainError("data literal '" + literal + "': expected poly:..., gauss:..., bump:... or zero");
    const std::string kind = s.substr(0, colon);
    const auto v = parse_list(s.substr(colon + 1));
    if (kind == "poly") {
        if (v.empty()) throw DomainError("data literal '" + literal + "': poly needs coefficients");
        return solver::DataFunction::polynomial(v);
    }
    if (kind == "gauss") {
        if (v.size() != 3) throw DomainError("data literal '" + literal + "': gauss takes amp,center,width");
        return solver::DataFunction::gaussian(v[0], v[1], v[2]);
    }
    if (kind == "bump") {
        if (v.size() != 2) throw DomainError("data literal '" + literal + "': bump takes center,radius");
        return solver::DataFunction::bump(v[0], v[1]);
    }
    throw DomainError("data literal '" + literal + "': unknown kind '" + kind + "'");
}

solver::GridSpec parse_grid(const std::string& text) {
    solver::GridSpec g;
    bool have_t = false, have_x = false;
    for (const auto& part : split(text, ';')) {
        const std::string p = trim(part);
        if (p.empty()) continue;
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw DomainError("grid '" + text + "': expected t=... and x=...");
        const std::string axis = trim(p.substr(0, eq));
        const auto f = split(p.substr(eq + 1), ':');
        solver::Range r;
        if (f.size() == 1) {
            r.start = r.stop = parse_number(f[0], "grid " + axis);
        } else if (f.size() == 3) {
            r.start = parse_number(f[0], "grid " + axis + " start");
            r.stop = parse_number(f[1], "grid " + axis + " stop");
            r.step = parse_number(f[2], "grid " + axis + " step");
        } else {
            throw DomainError("grid '" + text + "': axis " + axis + " takes start:stop:step or a single value");
        }
        r.values();  // validates
        if (axis == "t") {
            g.t = r;
            have_t = true;
        } else if (axis == "x") {
            g.x = r;
            have_x = true;
        } else {
            throw DomainError("grid '" + text + "': unknown axis '" + axis + "'");
        }
    }
    if (!have_t || !have_x) throw DomainError("grid '" + text + "': both t and x are required");
    return g;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string samples_to_csv(const std::vector<solver::SolutionSample>& samples) {
    std::string out = "t,x,value,phase_re,phase_im,est_error,method,region\n";
    for (const auto& s : samples) {
        const double x = s.x.empty() ? 0.0 : s.x[0];
        const double value = s.skipped ? NAN : s.value;
        out += format_double(s.t) + ',' + format_double(x) + ',' + format_double(value) + ',' +
               format_double(s.phase.real()) + ',' + format_double(s.phase.imag()) + ',' + format_double(s.est_error) +
               ',' + solver::to_string(s.method) + ',' + s.region + '\n';
    }
    return out;
}

json samples_to_json(const std::vector<solver::SolutionSample>& samples) {
    json arr = json::array();
    for (const auto& s : samples) {
        json j;
        j["t"] = s.t;
        j["x"] = s.x;
        j["value"] = s.skipped ? json(nullptr) : json(s.value);
        j["phase"] = {s.phase.real(), s.phase.imag()};
        j["est_error"] = s.est_error;
        j["method"] = solver::to_string(s.method);
        j["region"] = s.region;
        if (s.skipped) j["note"] = s.note;
        arr.push_back(std::move(j));
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

std::vector<std::string> suite_names() {
    return {"examples", "wave-limits", "kernels", "initial-conditions", "oracles", "proposition", "specfun", "hankel"};
}

std::vector<verify::VerificationReport> run_suite(const std::string& name) {
    using namespace verify;
    std::vector<VerificationReport> out;
    if (name == "all") {
        for (const auto& s : suite_names()) append(out, run_suite(s));
        return out;
    }
    spdlog::info("suite {}", name);
    if (name == "examples") {
        out.push_back(check_examples());
    } else if (name == "wave-limits") {
        append(out, check_wave_limits());
    } else if (name == "kernels") {
        for (int n = 1; n <= 3; ++n) {
            out.push_back(check_w_residual(n, 0.3, 100, 100 + n));
            out.push_back(check_w_identities(n, 0.3, 100, 200 + n));
        }
        out.push_back(check_k_shell_residual(0.3, 0.7, 100, 300));
        out.push_back(check_k_shell_residual(0.2, 2.0, 100, 300));
    } else if (name == "initial-conditions") {
        append(out, initial_condition_suite());
    } else if (name == "oracles") {
        out.push_back(check_weber_schafheitlin(10, 7));
        out.push_back(check_triple_bessel(10, 8));
        EPDParameters pn;
        pn.mu = 0.3;
        pn.q = -0.45;
        out.push_back(check_n_kernel_oracle(pn, 10, 9));
        EPDParameters ph;
        ph.mu = 0.3;
        ph.nu = 0.7;
        ph.q = -0.45;
        out.push_back(check_h_kernel_oracle(ph, 10, 10));
    } else if (name == "proposition") {
        const double draws[][4] = {{1.0, 1.3, 0.3, 0.4}, {0.5, 0.8, 0.2, 0.7}, {1.5, 2.0, 0.4, 1.2}};
        std::uint64_t seed = 21;
        for (const auto& d : draws) {
            const auto probes = proposition_probes(20, seed++);
            out.push_back(check_proposition(d[0], d[1], d[2], d[3], probes));
            const auto bad = check_proposition(d[0], d[1], d[2], d[3], probes, 1e-4, 1.0);
            out.push_back(negative_control(bad.name + " (negative control)", bad.max_residual, 1e-1));
        }
    } else if (name == "specfun") {
        append(out, check_specfun_identities());
    } else if (name == "hankel") {
        using solver::DataFunction;
        out.push_back(hankel_roundtrip(DataFunction::gaussian(1.0, 0.0, 1.0), 0.0, {0.3, 0.8, 1.3, 2.0}));
        out.push_back(hankel_roundtrip(DataFunction::gaussian(1.0, 3.0, 0.5), 0.2, {2.5, 2.9, 3.2, 3.6}));
        out.push_back(check_hankel_symbol(DataFunction::gaussian(1.0, 0.0, 1.0), 0.0, {0.5, 1.0, 2.0}));
        out.push_back(check_hankel_symbol(DataFunction::gaussian(1.0, 3.0, 0.5), 0.2, {0.5, 1.0, 2.0}));
    } else {
        std::string known;
        for (const auto& s : suite_names()) known += s + ", ";
        throw DomainError("unknown suite '" + name + "' (" + known + "all)");
    }
    return out;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        c.quad.validate();
        switch (c.command) {
            case Command::Eval: {
                const json r = eval(c);
                if (c.format == "json") {
                    write_output(c, dump(r), out);
                } else {
                    // Text output shows the digits the series tolerance supports.
                    const int digits = std::clamp(static_cast<int>(std::ceil(-std::log10(eval_tol(c)))), 1, 17);
                    char buf[40];
                    std::snprintf(buf, sizeof buf, "%.*g", digits, r.at("value").get<double>());
                    std::string line = buf;
                    if (r.contains("imag")) {
                        std::snprintf(buf, sizeof buf, "%.*g", digits, r.at("imag").get<double>());
                        line += std::string(" ") + buf + "i";
                    }
                    write_output(c, line + "\n", out);
                }
                return kOk;
            }
            case Command::Kernel: {
                const json r = kernel(c);
                if (c.format == "json") {
                    write_output(c, dump(r), out);
                } else {
                    write_output(c,
                                 "profile,phase_re,phase_im,region\n" + format_double(r["profile"].get<double>()) + ',' +
                                     format_double(r["phase_re"].get<double>()) + ',' +
                                     format_double(r["phase_im"].get<double>()) + ',' +
                                     r["region"].get<std::string>() + '\n',
                                 out);
                }
                return kOk;
            }
            case Command::Solve: {
                const auto samples = solve(c);
                write_output(c, c.format == "json" ? dump(samples_to_json(samples)) : samples_to_csv(samples), out);
                return kOk;
            }
            case Command::Verify: {
                auto reports = run_suite(c.target.empty() ? "all" : c.target);
                bool pass = true;
                json arr = json::array();
                std::string text;
                for (auto& r : reports) {
                    if (!r.pass) {
                        pass = false;
                        // Failure detail travels in the notes as well.
                        if (!(r.max_residual <= r.tolerance))
                            r.notes.push_back("FAIL: max residual " + format_double(r.max_residual) +
                                              " exceeds tolerance " + format_double(r.tolerance));
                        for (const auto& fc : r.failed_conditions) r.notes.push_back("FAIL: " + fc);
                        spdlog::error("verification failed: {}", r.name);
                    }
                    arr.push_back(r.to_json());
                    text += r.to_text();
                }
                json doc;
                doc["suite"] = c.target.empty() ? "all" : c.target;
                doc["pass"] = pass;
                doc["reports"] = arr;
                write_output(c, c.format == "text" ? text : dump(doc), out);
                return pass ? kOk : kVerificationFailed;
            }
        }
    } catch (const NoConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kConvergenceError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
    return kDomainError;
}

// ---------------------------------------------------------------------------
// Flags
// ---------------------------------------------------------------------------

namespace {

void setup_logging() {
    auto logger = spdlog::get("epd");
    if (!logger) logger = spdlog::stderr_color_mt("epd");
    spdlog::set_default_logger(logger);
    const char* env = std::getenv("EPD_LOG");
    const std::string level = env ? env : "error";
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        if (level != "error") std::cerr << "EPD_LOG='" << level << "' not recognised, using error\n";
        spdlog::set_level(spdlog::level::err);
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Euler-Poisson-Darboux kernels, solvers and checks"};
    app.require_subcommand(0, 1);

    RunConfig cfg;
    std::string config_path;
    bool print_config = false;
    app.add_option("--config", config_path, "Run from a JSON RunConfig file");
    app.add_flag("--print-config", print_config, "Print the RunConfig as JSON instead of running");

    const auto common = [&](CLI::App* s) {
        s->add_option("-o,--output", cfg.output, "Output file (a .meta.json sidecar is written next to it)");
        s->add_option("--format", cfg.format, "csv, json or text")->check(CLI::IsMember({"csv", "json", "text"}));
    };
    const auto params = [&](CLI::App* s) {
        s->add_option("--mu", cfg.params.mu, "mu");
        s->add_option("--nu", cfg.params.nu, "nu");
        s->add_option("--n", cfg.params.n, "dimension n");
        s->add_option("--q", cfg.params.q, "modified-problem exponent q");
    };

    std::map<std::string, double> eval_args, kernel_args;
    auto* ev = app.add_subcommand("eval", "Evaluate a special function");
    ev->add_option("function", cfg.target,
                   "gamma, rgamma, beta, pochhammer, 2f1, f4, besselj, bessely, legendre-p, legendre-q")
        ->required();
    for (const char* k : {"a", "b", "c", "d", "x", "y", "z", "order", "mu", "nu", "k", "tol"})
        ev->add_option(std::string("--") + k, eval_args[k]);
    common(ev);

    auto* ke = app.add_subcommand("kernel", "Evaluate a kernel: w and n take --t --x (x is r), k and h add --xp");
    ke->add_option("kernel", cfg.target, "w, n, k or h")->required();
    for (const char* k : {"t", "x", "xp"}) ke->add_option(std::string("--") + k, kernel_args[k]);
    params(ke);
    common(ke);

    std::string a_list, b_list;
    auto* so = app.add_subcommand("solve", "Solve on a grid; CSV columns t,x,value,phase_re,phase_im,est_error,method,region");
    so->add_option("problem", cfg.target, "classical, classical-modified, radial, radial-series, radial-modified")
        ->required();
    params(so);
    so->add_option("--f", cfg.f, "first datum: poly:c0,c1,..., gauss:amp,center,width, bump:center,radius, zero");
    so->add_option("--g", cfg.g, "second datum, same syntax");
    so->add_option("--a", a_list, "series coefficients of f, comma separated (radial-series)");
    so->add_option("--b", b_list, "series coefficients of g, comma separated (radial-series)");
    so->add_option("--grid", cfg.grid, "t=start:stop:step;x=start:stop:step, a bare value is one point")->required();
    so->add_option("--threads", cfg.threads, "worker threads, 0 for all cores");
    std::string scheme = "tanh-sinh";
    so->add_option("--scheme", scheme, "tanh-sinh or gauss-kronrod");
    so->add_option("--rel-tol", cfg.quad.rel_tol, "quadrature relative tolerance");
    so->add_option("--abs-tol", cfg.quad.abs_tol, "quadrature absolute tolerance");
    common(so);

    auto* ve = app.add_subcommand("verify", "Run verification suites; JSON report, exit 3 on failure");
    std::string suites = "all";
    for (const auto& s : suite_names()) suites += ", " + s;
    ve->add_option("suite", cfg.target, suites)->required();
    common(ve);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kDomainError;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw DomainError("cannot read config '" + config_path + "'");
            std::stringstream ss;
            ss << is.rdbuf();
            cfg = RunConfig::parse(ss.str());
        } else {
            if (ev->parsed()) {
                cfg.command = Command::Eval;
                for (const auto& [k, v] : eval_args)
                    if (ev->count("--" + k)) cfg.args[k] = v;
            } else if (ke->parsed()) {
                cfg.command = Command::Kernel;
                for (const auto& [k, v] : kernel_args)
                    if (ke->count("--" + k)) cfg.args[k] = v;
            } else if (so->parsed()) {
                cfg.command = Command::Solve;
                cfg.a = parse_list(a_list);
                cfg.b = parse_list(b_list);
                cfg.quad.scheme = scheme_from_string(scheme);
            } else if (ve->parsed()) {
                cfg.command = Command::Verify;
            } else {
                std::cerr << app.help();
                return kDomainError;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomainError;
    }
    if (print_config) {
        std::cout << dump(cfg.to_json());
        return kOk;
    }
    return run(cfg, std::cout, std::cerr);
}

}  // namespace epd::cli
