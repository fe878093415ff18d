#include "gpca/game.hpp"
#include "gpca/lattice.hpp"
#include "gpca/oracle.hpp"
#include "gpca/weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace gpca;

namespace {

constexpr int kOk = 0, kInvalid = 2, kViolation = 3;

struct Common {
    std::string p = "1/4", q = "1/4";
    std::uint64_t seed = 0;
    std::string out;
};

Params parse_params(const Common& c) {
    try {
        return Params(parse_rational(c.p), parse_rational(c.q));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("--p/--q: ") + e.what());
    }
}

json provenance(const std::string& command, const Common& c, const std::optional<Params>& pr) {
    json j{{"version", GPCA_VERSION}, {"command", command}, {"seed", c.seed}};
    if (pr) {
        j["p"] = to_string(pr->p());
        j["q"] = to_string(pr->q());
    }
    return j;
}

void emit(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << j.dump(2) << "\n";
}

template <class F>
void with_output(const std::string& path, F&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write " + path);
    write(f);
}

void require_even(std::size_t n, const char* what) {
    if (n == 0 || n % 2 != 0) throw std::invalid_argument(std::string(what) + " must be even and positive, got " + std::to_string(n));
}

// --measure FILE | --measure-seed N | --uniform, optionally --symmetrize
struct MeasureArgs {
    std::string file;
    std::optional<std::uint64_t> seed;
    bool uniform = false, symmetrized = false;

    void add(CLI::App* app) {
        app->add_option("--measure", file, "measure spec file (pi row, 3 M0 rows, 3 M1 rows)");
        app->add_option("--measure-seed", seed, "random exact Markov measure");
        app->add_flag("--uniform", uniform, "uniform i.i.d. measure");
        app->add_flag("--symmetrize", symmetrized, "apply the (i)-(iv) symmetrization");
    }
    std::pair<ExactMeasure, std::string> build() const {
        int given = !file.empty() + seed.has_value() + uniform;
        if (given != 1) throw std::invalid_argument("give exactly one of --measure, --measure-seed, --uniform");
        ExactMeasure mu = uniform_measure<Rational>();
        std::string origin = "uniform";
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw std::invalid_argument("cannot read measure file " + file);
            mu = make_markov_measure(parse_markov_spec(in));
            origin = "file:" + file;
        } else if (seed) {
            mu = random_markov_measure(*seed);
            origin = "markov:" + std::to_string(*seed);
        }
        if (symmetrized) {
            mu = symmetrize(mu);
            origin = "symmetrized-" + origin;
        }
        return {std::move(mu), origin};
    }
};

RingConfig initial_config(const std::string& init, std::size_t L) {
    if (init == "?" || init == "question") return RingConfig(L, Symbol::Question);
    if (init == "0" || init == "zero") return RingConfig(L, Symbol::Zero);
    if (init == "1" || init == "one") return RingConfig(L, Symbol::One);
    RingConfig c = RingConfig::parse(init);
    if (c.size() != L) throw std::invalid_argument("--init has length " + std::to_string(c.size()) + ", --L is " + std::to_string(L));
    return c;
}

json rational_json(const Rational& x) { return json{{"exact", to_string(x)}, {"decimal", to_decimal(x, 12)}}; }

json bracket_json(const RootBracket& b) {
    return json{{"lo", to_string(b.lo)}, {"hi", to_string(b.hi)}, {"lo_decimal", to_decimal(b.lo, 9)},
                {"hi_decimal", to_decimal(b.hi, 9)}, {"width", to_string(b.width())}};
}

std::vector<Params> parse_param_list(const std::string& text) {
    std::vector<Params> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("--params entries look like p:q, got '" + item + "'");
        out.emplace_back(parse_rational(item.substr(0, colon)), parse_rational(item.substr(colon + 1)));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gpca: envelope automaton, percolation game and weight-function checks"};
    app.set_version_flag("--version", GPCA_VERSION);
    app.require_subcommand(1);

    Common c;
    auto add_params = [&](CLI::App* s) {
        s->add_option("--p", c.p, "trap probability (rational)")->capture_default_str();
        s->add_option("--q", c.q, "target probability (rational)")->capture_default_str();
    };
    auto add_seed_out = [&](CLI::App* s) {
        s->add_option("--seed", c.seed)->capture_default_str();
        s->add_option("-o,--out", c.out, "output path, default stdout");
    };

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the envelope automaton on a ring");
    std::size_t L = 256, T = 256;
    std::string init = "?", format = "csv";
    add_params(sim);
    add_seed_out(sim);
    sim->add_option("--L", L, "ring length (even)")->capture_default_str();
    sim->add_option("--T", T, "steps")->capture_default_str();
    sim->add_option("--init", init, "?, 0, 1 or an explicit word like 00?1")->capture_default_str();
    sim->add_option("--format", format)->check(CLI::IsMember({"csv", "pgm", "json"}))->capture_default_str();

    // game
    auto* gm = app.add_subcommand("game", "estimate the draw probability of the percolation game");
    std::size_t W = 16, H = 16, samples = 100;
    std::string pgm;
    add_params(gm);
    add_seed_out(gm);
    gm->add_option("--width", W)->capture_default_str();
    gm->add_option("--height", H)->capture_default_str();
    gm->add_option("--samples", samples)->capture_default_str();
    gm->add_option("--pgm", pgm, "write the labels of the first sampled grid");

    // transfer
    auto* tr = app.add_subcommand("transfer", "pattern probability of a measure, or of its image");
    MeasureArgs tm;
    std::string pattern;
    long anchor = 0;
    bool image = false;
    int symmetry_k = 0;
    tm.add(tr);
    add_params(tr);
    tr->add_option("-o,--out", c.out);
    tr->add_option("--pattern", pattern, "e.g. 00[**][1*]");
    tr->add_option("--anchor", anchor)->capture_default_str();
    tr->add_flag("--image", image, "evaluate on the image under the envelope step");
    tr->add_option("--symmetry", symmetry_k, "also check properties (i)-(iv) up to this word length");

    // verify
    auto* vf = app.add_subcommand("verify", "check weight-function derivation steps");
    std::string steps = "all", param_list;
    std::size_t measures = 20;
    bool list_only = false;
    add_seed_out(vf);
    vf->add_option("--steps", steps, "all or comma separated ids")->capture_default_str();
    vf->add_option("--measures", measures, "panel measures per parameter point")->capture_default_str();
    vf->add_option("--params", param_list, "p:q,p:q,... (default: each step's own sample points)");
    vf->add_flag("--list", list_only, "print the catalog and exit");

    // roots
    auto* rt = app.add_subcommand("roots", "isolate the critical roots by exact bisection");
    std::string poly = "quintic", tol = "1/1000000";
    rt->add_option("--poly", poly)->check(CLI::IsMember({"quintic", "cubic", "both"}))->capture_default_str();
    rt->add_option("--tol", tol)->capture_default_str();
    rt->add_option("-o,--out", c.out);

    // region
    auto* rg = app.add_subcommand("region", "classify (p,q) against the ergodicity regions");
    add_params(rg);
    rg->add_option("--tol", tol, "bracket width for the case-2 boundary")->capture_default_str();
    rg->add_option("-o,--out", c.out);

    // oracle
    auto* orc = app.add_subcommand("oracle", "exact brute-force values on small rings");
    std::string mode = "ring";
    std::size_t N = 6;
    MeasureArgs om;
    T = 256;
    add_params(orc);
    orc->add_option("-o,--out", c.out);
    orc->add_option("--mode", mode)->check(CLI::IsMember({"ring", "pushforward", "draw"}))->capture_default_str();
    orc->add_option("--N", N, "ring width for --mode ring")->capture_default_str();
    orc->add_option("--steps", T, "steps for --mode ring (<= 64)");
    orc->add_option("--width", W);
    orc->add_option("--height", H);
    orc->add_option("--pattern", pattern);
    orc->add_option("--anchor", anchor);
    om.add(orc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (sim->parsed()) {
            const Params pr = parse_params(c);
            require_even(L, "--L");
            auto traj = run_trajectory(initial_config(init, L), pr, T, c.seed);
            Provenance prov{"simulate", c.seed, pr};
            if (format == "csv") with_output(c.out, [&](std::ostream& o) { write_density_csv(o, traj, prov); });
            else if (format == "pgm") with_output(c.out, [&](std::ostream& o) { write_raster_pgm(o, traj.configs, prov); });
            else {
                json j{{"provenance", provenance("simulate", c, pr)}, {"L", L}, {"T", T}, {"question_density", json::array()}};
                for (const auto& d : traj.densities) j["question_density"].push_back(to_string(d.fraction(Symbol::Question)));
                emit(j, c.out);
            }
            return kOk;
        }
        if (gm->parsed()) {
            const Params pr = parse_params(c);
            require_even(W, "--width");
            if (H == 0 || samples == 0) throw std::invalid_argument("--height and --samples must be positive");
            auto est = estimate_draw_probability(pr, W, H, samples, c.seed);
            json j{{"provenance", provenance("game", c, pr)},
                   {"p", to_string(pr.p())},
                   {"q", to_string(pr.q())},
                   {"width", W},
                   {"height", H},
                   {"samples", samples},
                   {"draw_estimate", est.mean},
                   {"ci95", est.ci95}};
            if (!pgm.empty()) {
                auto labels = backward_induce_labels(sample_mark_grid(pr, W, H, c.seed));
                std::ofstream f(pgm);
                if (!f) throw std::invalid_argument("cannot write " + pgm);
                write_raster_pgm(f, labels.rows, Provenance{"game", c.seed, pr});
                j["pgm"] = pgm;
            }
            emit(j, c.out);
            return kOk;
        }
        if (tr->parsed()) {
            auto [mu, origin] = tm.build();
            json j{{"provenance", provenance("transfer", c, std::nullopt)}, {"measure", origin}};
            std::optional<Params> pr;
            if (image || tr->count("--p") || tr->count("--q")) pr = parse_params(c);
            if (pr) {
                j["provenance"]["p"] = to_string(pr->p());
                j["provenance"]["q"] = to_string(pr->q());
            }
            if (!pattern.empty()) {
                CylinderPattern pat(pattern, anchor);
                j["pattern"] = pat.str();
                j["probability"] = rational_json(pattern_probability(mu, pat));
                if (image) j["image_probability"] = rational_json(pushforward_probability(mu, pat, *pr));
            }
            if (symmetry_k > 0) {
                auto rep = image ? symmetry_preservation_check(mu, *pr, symmetry_k) : check_symmetry_properties(mu, symmetry_k);
                const char* names[] = {"i", "ii", "iii", "iv"};
                for (int k = 0; k < 4; ++k)
                    j["symmetry"][names[k]] = json{{"holds", rep.property[k].holds},
                                                   {"checked", rep.property[k].checked},
                                                   {"counterexample", rep.property[k].counterexample}};
            }
            if (pattern.empty() && symmetry_k == 0) throw std::invalid_argument("nothing to do: give --pattern and/or --symmetry");
            emit(j, c.out);
            return kOk;
        }
        if (vf->parsed()) {
            if (list_only) {
                json j = json::array();
                for (const auto& s : derivation_catalog())
                    j.push_back({{"id", s.id}, {"kind", s.kind == StepKind::Identity ? "identity" : "lower_bound"},
                                 {"flagged", s.flagged}, {"needs", requirement_string(s.needs)}, {"domain", s.domain},
                                 {"statement", s.statement}, {"note", s.note}});
                emit(j, c.out);
                return kOk;
            }
            std::vector<std::string> ids;
            if (steps == "all") {
                for (const auto& s : derivation_catalog()) ids.push_back(s.id);
            } else {
                std::stringstream ss(steps);
                for (std::string id; std::getline(ss, id, ',');) ids.push_back(find_step(id).id);
            }
            if (measures == 0) throw std::invalid_argument("--measures must be positive");
            const auto points = param_list.empty() ? std::vector<Params>{} : parse_param_list(param_list);
            auto results = verify_catalog(ids, measures, c.seed, points);
            json j{{"provenance", provenance("verify", c, std::nullopt)}, {"measures", measures}, {"steps", json::array()}};
            bool violated = false;
            for (const auto& r : results) {
                const auto& step = find_step(r.id);
                json s{{"id", r.id},
                       {"kind", r.kind == StepKind::Identity ? "identity" : "lower_bound"},
                       {"flagged", r.flagged},
                       {"needs", requirement_string(r.needs)},
                       {"domain", step.domain},
                       {"checks", r.checks},
                       {"violations", r.violations}};
                if (r.checks == 0) s["verdict"] = "skipped";
                else if (r.violations > 0) s["verdict"] = "violation";
                else s["verdict"] = r.kind == StepKind::Identity ? "exact_equal" : "bound_holds";
                if (r.min_slack) s["min_slack"] = to_string(*r.min_slack);
                if (r.first_violation) {
                    const auto& v = *r.first_violation;
                    json d = json::object();
                    for (const auto& [name, val] : v.details) d[name] = to_string(val);
                    s["first_violation"] = {{"where", r.first_violation_where}, {"lhs", to_string(v.lhs)},
                                            {"rhs", to_string(v.rhs)}, {"slack", to_string(v.slack)}, {"values", d}};
                }
                if (!step.note.empty()) s["note"] = step.note;
                if (r.violations > 0 && !r.flagged) violated = true;
                j["steps"].push_back(std::move(s));
            }
            j["ok"] = !violated;
            emit(j, c.out);
            return violated ? kViolation : kOk;
        }
        if (rt->parsed()) {
            const Rational t = parse_rational(tol);
            if (t <= 0) throw std::invalid_argument("--tol must be positive");
            json j{{"provenance", provenance("roots", c, std::nullopt)}, {"tol", to_string(t)}};
            if (poly == "quintic" || poly == "both") {
                j["quintic"] = bracket_json(isolate_root(quintic(), 0, 1, t));
                j["quintic"]["poly"] = quintic().str();
            }
            if (poly == "cubic" || poly == "both") {
                j["cubic"] = bracket_json(isolate_root(cubic(), Rational(1, 2), Rational(3, 5), t));
                j["cubic"]["poly"] = cubic().str();
            }
            emit(j, c.out);
            return kOk;
        }
        if (rg->parsed()) {
            const Params pr = parse_params(c);
            const Rational t = parse_rational(tol);
            if (t <= 0) throw std::invalid_argument("--tol must be positive");
            json j{{"provenance", provenance("region", c, pr)}, {"region", region_string(classify_region(pr))}};
            j["case2_boundary_q"] = bracket_json(case2_boundary(pr.p(), t));
            emit(j, c.out);
            return kOk;
        }
        if (orc->parsed()) {
            const Params pr = parse_params(c);
            json j{{"provenance", provenance("oracle", c, pr)}, {"mode", mode}};
            if (mode == "ring") {
                if (!orc->count("--steps")) T = 16;
                auto ev = exact_ring_distribution_evolution(pr, N, T);
                j["N"] = N;
                j["steps"] = T;
                for (const auto& d : ev.question_density) j["question_density"].push_back(to_string(d));
            } else if (mode == "draw") {
                if (!orc->count("--width")) W = 4;
                if (!orc->count("--height")) H = 4;
                j["width"] = W;
                j["height"] = H;
                j["draw_probability"] = rational_json(exact_draw_probability_small(pr, W, H));
            } else {
                if (pattern.empty()) throw std::invalid_argument("--mode pushforward needs --pattern");
                auto [mu, origin] = om.build();
                CylinderPattern pat(pattern, anchor);
                j["measure"] = origin;
                j["pattern"] = pat.str();
                j["image_probability"] = rational_json(exhaustive_pushforward_check(mu, pat, pr));
            }
            emit(j, c.out);
            return kOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kOk;
}
