// bae: command-line front end.
//
// Every command prints one JSON document on stdout.  Exit status is 0 when
// all checks pass, 1 when a check fails (the document then carries
// {"status": "fail", "module", "op", "witness"}), 2 on malformed input.

#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "bae/generation.hpp"
#include "bae/io.hpp"
#include "bae/linear_problem.hpp"
#include "bae/rs_hierarchy.hpp"

using namespace bae;
using io::json;

namespace {

// Where a library exception came from, for the failure report.
struct Stage {
    std::string module = "cli", op = "parse";
    void operator()(std::string m, std::string o) {
        module = std::move(m);
        op = std::move(o);
    }
};

// A check that did not hold.
struct CheckFailed {
    std::string module, op;
    json witness;
};

void require(bool ok, const std::string& module, const std::string& op, json witness) {
    if (!ok) throw CheckFailed{module, op, std::move(witness)};
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<int> int_list(const std::string& s) {
    std::vector<int> r;
    for (auto& w : split(s)) {
        size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(w, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != w.size()) throw InputError("not an integer: '" + w + "'");
        r.push_back(v);
    }
    return r;
}

std::vector<Rat> rat_list(const std::string& s) {
    std::vector<Rat> r;
    for (auto& w : split(s)) r.push_back(io::rat_from(json(w)));
    return r;
}

std::vector<cd> complex_list(const std::string& s) {
    std::vector<cd> r;
    for (auto& w : split(s)) {
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(w, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != w.size()) throw InputError("not a number: '" + w + "'");
        r.emplace_back(v, 0.0);
    }
    return r;
}

double default_tol() {
    if (const char* e = std::getenv("BAE_TOL")) {
        char* end = nullptr;
        double v = std::strtod(e, &end);
        if (end && *end == '\0' && v > 0) return v;
        throw InputError("BAE_TOL must be a positive number");
    }
    return 1e-8;
}

json matrix_json(const CMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(io::to_json(cd(m(i, j))));
        rows.push_back(r);
    }
    return rows;
}

json cpoly_json(const CPoly& p) { return io::to_json(p.c); }

json ba_json(const MFrac& R) { return json{{"num", io::to_json(R.num())}, {"den", io::to_json(R.den())}}; }

QPoly in_x_only(const ExactPoly& p) { return p.restrict_to(kVarX); }

bool same_up_to_scalar(const QPoly& a, const QPoly& b) {
    if (a.zero() || b.zero()) return a.zero() && b.zero();
    return b.c.back() * a == a.c.back() * b;
}

enum class Kind { Solution, MatrixA, Seed, Flag, Point, Spectrum };

Kind kind_of(const json& j) {
    if (!j.is_object()) throw InputError("input must be a JSON object");
    if (j.contains("flag_vectors")) return Kind::Flag;
    if (j.contains("seed")) return Kind::Seed;
    if (j.contains("A")) return Kind::MatrixA;
    if (j.contains("y")) return Kind::Solution;
    if (j.contains("mu")) return Kind::Spectrum;
    if (j.contains("u")) return Kind::Point;
    throw InputError("cannot tell what the input file holds");
}

SpectralMatrixA matrix_of(const json& j, Kind k) {
    if (k == Kind::Seed) return seed_to_A(io::seed_from(j));
    return io::matrix_a_from(j);
}

// ---- commands ---------------------------------------------------------------

struct GenArgs {
    int N = 3;
    std::string J, c, from;
    std::optional<unsigned> seed;
};

json cmd_gen(const GenArgs& a, Stage& stage) {
    GenerationPath path{int_list(a.J), {}};
    if (!a.c.empty()) path.c = rat_list(a.c);
    if (a.c.empty() && a.seed) {
        std::mt19937_64 rng(*a.seed);
        std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
        for (size_t s = 0; s < path.J.size(); ++s) {
            Rat r(num(rng), den(rng));
            r.canonicalize();
            path.c.push_back(r);
        }
    }
    if (path.c.empty()) path.c.assign(path.J.size(), Rat(0));
    if (path.c.size() != path.J.size()) throw InputError("--J and --c differ in length");
    SolutionTuple y = a.from.empty() ? SolutionTuple::empty(a.N) : io::solution_from(io::read_file(a.from));
    stage("generation", "generate");
    for (size_t s = 0; s < path.J.size(); ++s) y = generate(y, path.J[s], path.c[s]);
    stage("bethe", "verify_bae");
    require(verify_bae(y).satisfied, "bethe", "verify_bae", io::to_json(y));
    json out = io::to_json(y);
    out["path"] = {{"J", path.J}, {"c", io::array_of(path.c, [](const Rat& r) { return io::to_json(r); })}};
    return out;
}

json cmd_verify(const std::string& file, bool laxdd, Stage& stage) {
    auto y = io::solution_from(io::read_file(file));
    stage("bethe", "verify_bae");
    auto rep = verify_bae(y);
    json out{{"N", y.N()}, {"generic", rep.generic}, {"satisfied", rep.satisfied},
             {"Q", compute_Q(y.degrees())}};
    json failing = json::array();
    for (auto& [n, r] : rep.failing_equations) failing.push_back({{"n", n}, {"remainder", io::poly_text(r)}});
    require(rep.satisfied, "bethe", "verify_bae", failing.empty() ? json("tuple is not generic") : failing);
    if (laxdd) {
        stage("linearproblem", "verify_laxdd");
        auto lr = verify_laxdd(y, build_psi_family(y));
        out["laxdd"] = lr.ok;
        require(lr.ok, "linearproblem", "verify_laxdd", lr.witness);
    }
    return out;
}

json cmd_spectral(const std::string& file, int n, const std::string& t, double tol, Stage& stage) {
    json in = io::read_file(file);
    Kind k = kind_of(in);
    if (k == Kind::Spectrum) {
        auto s = io::spectrum_from(in);
        stage("rs_spectral", "inverse_transform");
        auto r = inverse_transform(s, complex_list(t));
        return json{{"y", cpoly_json(r.y)}, {"point", io::to_json(r.point)}};
    }
    if (k == Kind::Point) {
        auto p = io::phase_point_from(in);
        stage("rs_spectral", "direct_transform");
        try {
            auto s = direct_transform(p);
            stage("rs_spectral", "inverse_transform");
            auto back = inverse_transform(s).point;
            back = detail::reorder(back, detail::nearest_order(p.u, back.u));
            double err = 0;
            for (int i = 0; i < p.k(); ++i)
                err = std::max({err, rel_err(p.u[i], back.u[i]), rel_err(p.gamma[i], back.gamma[i])});
            require(err <= tol, "rs_spectral", "round_trip", json{{"relative_error", err}});
            return json{{"spectrum", io::to_json(s)}, {"round_trip_error", err}};
        } catch (const DegenerateSpectrum&) {
            stage("rs_spectral", "extended_direct");
            auto e = extended_direct(p);
            json W = json::array();
            for (auto& m : e.W) W.push_back(matrix_json(m));
            return json{{"extended", {{"mu", io::to_json(e.mu)}, {"m", e.m}, {"W", W}}}};
        }
    }
    if (k != Kind::Solution) throw InputError("spectral takes a solution, a phase point or a spectrum");
    auto y = io::solution_from(in);
    if (n < 1 || n > y.N()) throw InputError("--n out of range");
    if (y.y(n).degree() == 0) throw InputError("slot " + std::to_string(n) + " has no roots");
    stage("linearproblem", "residues");
    auto res = residues_numeric(y, n);
    PhasePoint p{res.roots, res.gamma};
    auto ex = residues_exact(y, n);
    auto cp = QPoly(faddeev_leverrier(spectral_operator(y.y(n), ex.gamma)).charpoly);
    stage("rs_spectral", "extended_direct");
    ExtendedOptions opt;
    opt.spectrum = spectrum_from_charpoly(cp);
    auto e = extended_direct(p, opt);
    json W = json::array();
    for (auto& m : e.W) W.push_back(matrix_json(m));
    const bool unipotent = cp == pow(QPoly::linear(Rat(1)), y.y(n).degree());
    require(unipotent, "rs_spectral", "charpoly", json{{"charpoly", io::poly_text(cp)}});
    return json{{"n", n},
                {"point", io::to_json(p)},
                {"charpoly", io::poly_text(cp)},
                {"extended", {{"mu", io::to_json(e.mu)}, {"m", e.m}, {"W", W}}}};
}

json cmd_baker(const std::string& file, int times, Stage& stage) {
    json in = io::read_file(file);
    Kind k = kind_of(in);
    json fam_json = json::array();
    if (k == Kind::Solution) {
        auto y = io::solution_from(in);
        stage("linearproblem", "build_psi_family");
        auto psis = build_psi_family(y);
        for (auto& p : psis)
            fam_json.push_back({{"n", p.n}, {"num", io::to_json(p.num)}, {"den_x", io::to_json(p.den_x)},
                                {"zpow", p.zpow}, {"q", io::to_json(p.q)}});
        stage("linearproblem", "verify_laxdd");
        auto rep = verify_laxdd(y, psis);
        require(rep.ok, "linearproblem", "verify_laxdd", rep.witness);
        return json{{"source", "solution"}, {"family", fam_json}};
    }
    if (k == Kind::MatrixA || k == Kind::Seed) {
        stage("periodic_inverse", "seed_to_A");
        auto A = matrix_of(in, k);
        stage("periodic_inverse", "build_family");
        auto fam = build_family(A, times);
        for (int n = 0; n <= fam.N; ++n)
            fam_json.push_back({{"n", n}, {"tau", io::to_json(fam.y[n])}, {"R", ba_json(fam.R(n))}});
        stage("periodic_inverse", "check_periodicity");
        require(check_periodicity(fam), "periodic_inverse", "check_periodicity", json("R_N differs from z^N R_0"));
        auto rep = family_laxdd(fam);
        require(rep.ok, "periodic_inverse", "family_laxdd", rep.witness);
        return json{{"source", "A"}, {"nu", A.nu}, {"family", fam_json}};
    }
    if (k == Kind::Flag) {
        auto F = io::flag_from(in);
        stage("grassmann", "baker");
        for (int i = 1; i <= F.N; ++i)
            fam_json.push_back({{"i", i}, {"R", ba_json(baker(subspace(F, i), times))}});
        auto rep = ba_relations(F, times);
        require(rep.ok, "grassmann", "ba_relations", rep.witness);
        return json{{"source", "flag"}, {"family", fam_json}};
    }
    throw InputError("baker takes a solution, a matrix A, a seed or a flag");
}

json cmd_tau(const std::string& file, const std::string& t, Stage& stage) {
    auto F = io::flag_from(io::read_file(file));
    auto tv = rat_list(t);
    const int M = static_cast<int>(tv.size());
    stage("grassmann", "mkdv_from_flag");
    auto m = mkdv_from_flag(F, M);
    json taus = json::array(), at = json::array(), subsets = json::array();
    std::vector<QPoly> ys;
    for (int i = 0; i < F.N; ++i) {
        taus.push_back(io::to_json(m.tau[i]));
        ys.push_back(in_x_only(at_times(m.tau[i], tv)));
        at.push_back(io::poly_text(ys.back()));
        subsets.push_back(order_subset(m.W[i]).sequence());
    }
    require(check_mkdv_containment(m), "grassmann", "mkdv_from_flag", json("z W_i is not inside W_{i+1}"));
    stage("bethe", "verify_bae");
    SolutionTuple y(ys);
    auto rep = verify_bae(y);
    require(rep.satisfied, "bethe", "verify_bae", io::to_json(y));
    return json{{"tau", taus}, {"tau_at_t", at}, {"solution", io::to_json(y)}, {"order_subsets", subsets}};
}

json cmd_evolve(const std::string& file, const std::string& t, double tol, Stage& stage) {
    json in = io::read_file(file);
    Kind k = kind_of(in);
    if (k == Kind::Point || k == Kind::Spectrum) {
        auto tv = complex_list(t);
        GenericSpectrum s;
        PhasePoint p;
        if (k == Kind::Point) {
            p = io::phase_point_from(in);
            stage("rs_spectral", "direct_transform");
            s = direct_transform(p);
        } else {
            s = io::spectrum_from(in);
            stage("rs_spectral", "inverse_transform");
            p = inverse_transform(s).point;
        }
        stage("rs_spectral", "inverse_transform");
        auto r = inverse_transform(s, tv);
        json out{{"t", io::to_json(tv)}, {"y", cpoly_json(r.y)}, {"point", io::to_json(r.point)}};
        // along t_1 alone the flow is the RS equation of motion; integrate it as a check
        bool only_t1 = !tv.empty() && tv[0].imag() == 0;
        for (size_t j = 1; j < tv.size(); ++j) only_t1 = only_t1 && tv[j] == cd(0);
        if (only_t1) {
            stage("rs_spectral", "rs_integrate");
            const int steps = std::max(200, static_cast<int>(std::abs(tv[0].real()) * 2000));
            auto q = rs_integrate(p, tv[0].real() / steps, steps);
            q = detail::reorder(q, detail::nearest_order(r.point.u, q.u));
            double err = 0;
            for (int i = 0; i < q.k(); ++i)
                err = std::max({err, rel_err(r.point.u[i], q.u[i]), rel_err(r.point.gamma[i], q.gamma[i])});
            out["integration_error"] = err;
            require(err <= std::max(tol, 1e-6), "rs_spectral", "rs_integrate", json{{"relative_error", err}});
        }
        return out;
    }
    auto tv = rat_list(t);
    if (tv.empty()) throw InputError("--t needs at least one time");
    SpectralMatrixA A;
    if (k == Kind::Solution) {
        stage("periodic_inverse", "A_from_tuple");
        A = A_from_tuple(io::solution_from(in)).A;
    } else if (k == Kind::MatrixA || k == Kind::Seed) {
        A = matrix_of(in, k);
    } else {
        throw InputError("evolve takes a phase point, a spectrum, a solution, a matrix A or a seed");
    }
    stage("periodic_inverse", "build_family");
    auto fam = build_family(A, static_cast<int>(tv.size()));
    auto y = tuple_at(fam, tv);
    stage("bethe", "verify_bae");
    require(verify_bae(y).satisfied, "bethe", "verify_bae", io::to_json(y));
    json taus = json::array();
    for (int n = 1; n <= fam.N; ++n) taus.push_back(io::to_json(fam.y[n]));
    return json{{"t", io::array_of(tv, [](const Rat& r) { return io::to_json(r); })},
                {"solution", io::to_json(y)},
                {"tau", taus}};
}

json cmd_crosscheck(int N, const std::string& J, const std::string& c, Stage& stage) {
    GenArgs g;
    g.N = N;
    g.J = J;
    g.c = c;
    json gen = cmd_gen(g, stage);
    auto y = io::solution_from(gen);
    json out{{"generation", gen}};
    auto agree = [&](const SolutionTuple& other, const std::string& module, const std::string& op) {
        for (int n = 1; n <= N; ++n)
            require(same_up_to_scalar(other.y(n), y.y(n)), module, op,
                    json{{"n", n}, {"generation", io::poly_text(y.y(n))}, {module, io::poly_text(other.y(n))}});
    };

    // flag pipeline: the same generations performed on flags
    stage("grassmann", "generate_flag");
    FlagTuple F = trivial_flag(N);
    auto path = int_list(J);
    auto cs = c.empty() ? std::vector<Rat>(path.size(), Rat(0)) : rat_list(c);
    for (size_t s = 0; s < path.size(); ++s) F = generate_flag_matching(F, path[s], cs[s]);
    stage("grassmann", "mkdv_from_flag");
    auto m = mkdv_from_flag(F, 0);
    require(check_mkdv_containment(m), "grassmann", "mkdv_from_flag", json("z W_i is not inside W_{i+1}"));
    std::vector<QPoly> taus;
    for (auto& t : m.tau) taus.push_back(in_x_only(t));
    SolutionTuple yF(taus);
    agree(yF, "grassmann", "mkdv_from_flag");
    out["flag"] = {{"flag", io::to_json(F)}, {"solution", io::to_json(yF)}};

    // matrix-A pipeline: A read off the wave functions of the solution (or off
    // the flag when the tuple is not generic), then through its seed
    std::string source = "solution";
    SpectralMatrixA A;
    if (is_generic(y) && has_simple_roots(y)) {
        stage("periodic_inverse", "A_from_tuple");
        A = A_from_tuple(y).A;
    } else {
        stage("grassmann", "A_from_flag");
        A = A_from_flag(F);
        source = "flag";
    }
    stage("periodic_inverse", "seed_from_A");
    auto seed = seed_from_A(A);
    stage("periodic_inverse", "seed_to_A");
    auto A2 = seed_to_A(seed);
    stage("periodic_inverse", "bethe_from_A");
    auto yA = bethe_from_A(A2);
    agree(yA, "periodic_inverse", "bethe_from_A");
    out["matrix_A"] = {{"source", source}, {"A", io::to_json(A2)}, {"seed", io::to_json(seed)},
                       {"solution", io::to_json(yA)}};

    // and the flag carried by A
    stage("grassmann", "flag_from_A");
    auto mA = mkdv_from_flag(flag_from_A(A2), 0);
    std::vector<QPoly> tausA;
    for (auto& t : mA.tau) tausA.push_back(in_x_only(t));
    agree(SolutionTuple(tausA), "grassmann", "flag_from_A");
    out["agree"] = true;
    return out;
}

json failure_report(const std::string& module, const std::string& op, const json& witness) {
    return json{{"status", "fail"}, {"module", module}, {"op", op}, {"witness", witness}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bethe ansatz equations, spectral transforms and tau functions"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    double tol = 0;
    app.add_option("--out", out_path, "write the JSON result to this file as well");
    app.add_option("--tol", tol, "numeric tolerance (default 1e-8 or $BAE_TOL)")->check(CLI::PositiveNumber);

    GenArgs gen;
    auto* c_gen = app.add_subcommand("gen", "generate a solution from the empty tuple (or --from)");
    c_gen->add_option("--N", gen.N, "number of polynomials")->check(CLI::Range(1, 64));
    c_gen->add_option("--J", gen.J, "directions, comma separated")->required();
    c_gen->add_option("--c", gen.c, "rational parameters, comma separated");
    c_gen->add_option("--from", gen.from, "start from this solution file");
    c_gen->add_option("--seed", gen.seed, "draw random parameters when --c is omitted");

    std::string file;
    bool laxdd = false;
    auto* c_verify = app.add_subcommand("verify", "check the Bethe equations of a solution file");
    c_verify->add_option("file", file)->required();
    c_verify->add_flag("--laxdd", laxdd, "also check the generating linear problem");

    int slot = 1;
    std::string times = "";
    auto* c_spec = app.add_subcommand("spectral", "spectral data of a phase point, solution slot or spectrum");
    c_spec->add_option("file", file)->required();
    c_spec->add_option("--n", slot, "slot of a solution");
    c_spec->add_option("--t", times, "times for the inverse transform");

    int M = 0;
    auto* c_baker = app.add_subcommand("baker", "gauge-stripped wave functions");
    c_baker->add_option("file", file)->required();
    c_baker->add_option("--times", M, "number of active times")->check(CLI::Range(0, 8));

    auto* c_tau = app.add_subcommand("tau", "tau functions of a flag");
    c_tau->add_option("--flag", file)->required();
    c_tau->add_option("--t", times, "times t_1,t_2,.. (rational)");

    auto* c_evolve = app.add_subcommand("evolve", "move along the flows");
    c_evolve->add_option("file", file)->required();
    c_evolve->add_option("--t", times, "times t_1,t_2,..")->required();

    int N = 3;
    std::string J, cs;
    auto* c_cross = app.add_subcommand("crosscheck", "compare generation, matrix A and flag pipelines");
    c_cross->add_option("--N", N)->check(CLI::Range(2, 64));
    c_cross->add_option("--J", J)->required();
    c_cross->add_option("--c", cs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Stage stage;
    json result;
    int status = 0;
    try {
        if (tol == 0) tol = default_tol();
        if (*c_gen) result = cmd_gen(gen, stage);
        else if (*c_verify) result = cmd_verify(file, laxdd, stage);
        else if (*c_spec) result = cmd_spectral(file, slot, times, tol, stage);
        else if (*c_baker) result = cmd_baker(file, M, stage);
        else if (*c_tau) result = cmd_tau(file, times, stage);
        else if (*c_evolve) result = cmd_evolve(file, times, tol, stage);
        else if (*c_cross) result = cmd_crosscheck(N, J, cs, stage);
        result["status"] = "pass";
    } catch (const CheckFailed& f) {
        result = failure_report(f.module, f.op, f.witness);
        status = 1;
    } catch (const InputError& e) {
        result = {{"status", "input_error"}, {"error", e.code()}, {"message", e.what()}};
        status = 2;
    } catch (const DegreeNotIncreasing& e) {
        result = {{"status", "input_error"}, {"error", e.code()}, {"message", e.what()}};
        status = 2;
    } catch (const FlagInvalid& e) {
        result = {{"status", "input_error"}, {"error", e.code()}, {"message", e.what()}};
        status = 2;
    } catch (const json::exception& e) {
        result = {{"status", "input_error"}, {"error", "InputError"}, {"message", e.what()}};
        status = 2;
    } catch (const Error& e) {
        result = failure_report(stage.module, stage.op, json{{"error", e.code()}, {"message", e.what()}});
        status = 1;
    }
    std::cout << result.dump(2) << "\n";
    if (status == 2) std::cerr << "bae: " << result.value("message", "bad input") << "\n";
    if (!out_path.empty() && status != 2) {
        try {
            io::write_file(out_path, result);
        } catch (const InputError& e) {
            std::cerr << "bae: " << e.what() << "\n";
            return 2;
        }
    }
    return status;
}
