// rebel: event-driven simulation and analysis of rebellious voter models
// and their parity-conserving interface processes on a ring.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rebel/analysis.hpp"
#include "rebel/edge.hpp"
#include "rebel/engine.hpp"
#include "rebel/exact.hpp"
#include "rebel/model.hpp"
#include "rebel/observables.hpp"
#include "rebel/rng.hpp"

namespace {

using namespace rebel;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Family parse_family(const std::string& s) {
    if (s == "one-sided") return Family::OneSidedRV;
    if (s == "two-sided") return Family::TwoSidedRV;
    if (s == "disagreement") return Family::Disagreement;
    if (s == "swapping") return Family::Swapping;
    if (s == "mixed") return Family::MixedOneSided;
    throw CLI::ValidationError("--model", "unknown model '" + s + "'");
}

Representation parse_rep(const std::string& s) {
    if (s == "spin") return Representation::Spin;
    if (s == "interface") return Representation::Interface;
    if (s == "mirror-dual") return Representation::MirrorDual;
    throw CLI::ValidationError("--rep", "unknown representation '" + s + "'");
}

InitialState parse_init(const std::string& s) {
    if (s == "single") return InitialState::SingleParticle;
    if (s == "count") return InitialState::ParticleCount;
    if (s == "half") return InitialState::ProductHalf;
    throw CLI::ValidationError("--init", "unknown initial state '" + s + "'");
}

/// Flags shared by the trajectory-running subcommands.
struct PlanArgs {
    std::string model = "one-sided";
    std::string rep = "interface";
    int n_sites = 1024;
    double total_time = 1e6;
    int bins = 128;
    double ab = 0.0, ae = 0.5;
    double alpha_fixed = -1.0;
    std::uint64_t seed = 1;
    int replicas = 1;
    int threads = 1;
    double burn_in = -1.0;
    std::string init = "single";
    int particle_count = 1;
    int max_k = 21;
    std::string out;

    void add_to(CLI::App* cmd, const std::string& default_out) {
        out = default_out;
        cmd->add_option("--model", model, "one-sided|two-sided|disagreement|swapping|mixed");
        cmd->add_option("--rep", rep, "spin|interface|mirror-dual");
        cmd->add_option("--N", n_sites, "ring size")->required();
        cmd->add_option("--T", total_time, "total simulated time");
        cmd->add_option("--n", bins, "number of time bins");
        cmd->add_option("--ab", ab, "alpha at t=0");
        cmd->add_option("--ae", ae, "alpha at t=T");
        cmd->add_option("--alpha", alpha_fixed, "fixed alpha (sets --ab and --ae)");
        cmd->add_option("--seed", seed, "base seed");
        cmd->add_option("--replicas", replicas, "independent replicas");
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_option("--burn-in", burn_in, "burn-in time (default 1% of T)");
        cmd->add_option("--init", init, "single|count|half");
        cmd->add_option("--particles", particle_count, "initial particle count for --init count");
        cmd->add_option("--max-k", max_k, "largest particle count tracked (odd)");
        cmd->add_option("--out", out, "output file prefix");
    }

    SweepPlan plan() const {
        SweepPlan p;
        p.spec = make_spec(parse_family(model), parse_rep(rep), 0.5);
        p.n_sites = n_sites;
        p.total_time = total_time;
        p.bins = bins;
        p.alpha_begin = alpha_fixed >= 0 ? alpha_fixed : ab;
        p.alpha_end = alpha_fixed >= 0 ? alpha_fixed : ae;
        p.seed = seed;
        p.initial = parse_init(init);
        p.particle_count = particle_count;
        p.burn_in = burn_in;
        p.max_k = max_k;
        p.validate();
        return p;
    }
};

/// Files written so far; removed on failure so no partial output survives.
struct OutputSet {
    std::vector<std::string> files;

    std::ofstream open(const std::string& path) {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + path);
        files.push_back(path);
        return os;
    }
    void discard() {
        for (const auto& f : files) std::remove(f.c_str());
    }
};

void write_manifest(OutputSet& outs, const std::string& path, const PlanArgs& args,
                    const SweepPlan& plan, double wall_s,
                    const std::vector<std::string>& extra = {}) {
    auto os = outs.open(path);
    os << "tool=rebel\n";
    os << "build=" << __VERSION__ << "\n";
    os << "model=" << family_name(plan.spec.family) << "\n";
    os << "rep=" << representation_name(plan.spec.representation) << "\n";
    os << "n_sites=" << plan.n_sites << "\n";
    os << "total_time=" << fmt(plan.total_time) << "\n";
    os << "bins=" << plan.bins << "\n";
    os << "alpha_begin=" << fmt(plan.alpha_begin) << "\n";
    os << "alpha_end=" << fmt(plan.alpha_end) << "\n";
    const char* dir = plan.alpha_end > plan.alpha_begin   ? "up"
                      : plan.alpha_end < plan.alpha_begin ? "down"
                                                          : "fixed";
    os << "direction=" << dir << "\n";
    os << "burn_in=" << fmt(plan.effective_burn_in()) << "\n";
    os << "init=" << args.init << "\n";
    os << "particle_count=" << plan.particle_count << "\n";
    os << "max_k=" << plan.max_k << "\n";
    os << "seed=" << plan.seed << "\n";
    os << "replicas=" << args.replicas << "\n";
    os << "threads=" << args.threads << "\n";
    for (int r = 0; r < args.replicas; ++r)
        os << "replica_seed_" << r << "="
           << replica_seed(plan.seed, static_cast<std::uint64_t>(r)) << "\n";
    for (const auto& line : extra) os << line << "\n";
    for (std::size_t i = 0; i + 1 < outs.files.size(); ++i)
        os << "output_" << i << "=" << outs.files[i] << "\n";
    os << "wall_time_s=" << fmt(wall_s) << "\n";
}

/// Jackknife ratio over replicas for one bin; invalid bins give nan.
template <class Num, class Den>
CurvePoint bin_point(double alpha, std::size_t nreps, Num num_of, Den den_of) {
    std::vector<double> num(nreps), den(nreps);
    double total = 0;
    for (std::size_t r = 0; r < nreps; ++r) {
        num[r] = num_of(r);
        den[r] = den_of(r);
        total += den[r];
    }
    if (total <= 0) return {alpha, std::nan(""), std::nan("")};
    return jackknife_ratio(alpha, num, den);
}

int cmd_sweep(const PlanArgs& args) {
    const SweepPlan plan = args.plan();
    const auto t0 = std::chrono::steady_clock::now();
    const ReplicaBins reps = run_replicas(plan, args.replicas, args.threads);
    const auto merged = merge_replicas(reps);

    OutputSet outs;
    {
        auto os = outs.open(args.out + ".csv");
        os << "bin_index,alpha_mean,elapsed,rho_hat";
        for (int k = 1; k <= plan.max_k; k += 2) os << ",chi_" << k;
        os << ",mu_hat,rho_se";
        for (int k = 1; k <= plan.max_k; k += 2) os << ",chi_" << k << "_se";
        os << ",mu_se,events\n";
        for (int b = 0; b < plan.bins; ++b) {
            const double alpha = merged[b].alpha_mean();
            auto el = [&](std::size_t r) { return reps[r][b].elapsed; };
            CurvePoint rho = bin_point(
                alpha, reps.size(),
                [&](std::size_t r) { return 2.0 * reps[r][b].weighted_ones / plan.n_sites; },
                el);
            CurvePoint mu = bin_point(
                alpha, reps.size(),
                [&](std::size_t r) { return reps[r][b].weighted_ones; }, el);
            std::vector<CurvePoint> chi;
            for (int k = 1; k <= plan.max_k; k += 2)
                chi.push_back(bin_point(
                    alpha, reps.size(),
                    [&](std::size_t r) { return reps[r][b].time_at(k); }, el));
            os << b << "," << fmt(alpha) << "," << fmt(merged[b].elapsed) << ","
               << fmt(rho.value);
            for (const auto& c : chi) os << "," << fmt(c.value);
            os << "," << fmt(mu.value) << "," << fmt(rho.stderr_);
            for (const auto& c : chi) os << "," << fmt(c.stderr_);
            os << "," << fmt(mu.stderr_) << "," << merged[b].events << "\n";
        }
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(outs, args.out + ".manifest", args, plan, wall);
    return 0;
}

int cmd_harmonic(const PlanArgs& args, const std::string& pattern_csv, bool rep_given) {
    SweepPlan plan = args.plan();
    // the one-sided harmonic functions are defined along the mirror dual
    if (plan.spec.family == Family::OneSidedRV && !rep_given)
        plan.spec = make_spec(plan.spec.family, Representation::MirrorDual, 0.5);

    std::stringstream ss(pattern_csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) plan.patterns.push_back(Pattern::parse(tok));
    if (plan.patterns.empty())
        throw CLI::ValidationError("--patterns", "at least one pattern required");
    plan.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const ReplicaBins reps = run_replicas(plan, args.replicas, args.threads);
    const auto merged = merge_replicas(reps);

    OutputSet outs;
    {
        auto os = outs.open(args.out + ".csv");
        os << "bin_index,alpha_mean,elapsed";
        for (const auto& p : plan.patterns) os << ",f_" << p.text;
        for (const auto& p : plan.patterns) os << ",f_" << p.text << "_se";
        os << ",events\n";
        for (int b = 0; b < plan.bins; ++b) {
            const double alpha = merged[b].alpha_mean();
            std::vector<CurvePoint> f;
            for (std::size_t p = 0; p < plan.patterns.size(); ++p)
                f.push_back(bin_point(
                    alpha, reps.size(),
                    [&](std::size_t r) { return reps[r][b].pattern_odd_time[p]; },
                    [&](std::size_t r) { return reps[r][b].norm_time; }));
            os << b << "," << fmt(alpha) << "," << fmt(merged[b].elapsed);
            for (const auto& c : f) os << "," << fmt(c.value);
            for (const auto& c : f) os << "," << fmt(c.stderr_);
            os << "," << merged[b].events << "\n";
        }
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string plist = "patterns=";
    for (std::size_t p = 0; p < plan.patterns.size(); ++p)
        plist += (p ? "," : "") + plan.patterns[p].text;
    write_manifest(outs, args.out + ".manifest", args, plan, wall, {plist});
    return 0;
}

int cmd_edge(const PlanArgs& args, const std::string& side_arg) {
    const SweepPlan plan = args.plan();
    const bool left = side_arg == "left" || side_arg == "both";
    const bool right = side_arg == "right" || side_arg == "both";
    if (!left && !right)
        throw CLI::ValidationError("--side", "expected left, right or both");

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<EdgeBin>> lrep, rrep;
    if (left) lrep = edge_replicas(plan, EdgeSide::Left, args.replicas, args.threads);
    if (right) rrep = edge_replicas(plan, EdgeSide::Right, args.replicas, args.threads);

    auto side_point = [&](const std::vector<std::vector<EdgeBin>>& reps, int b, double sign,
                          double alpha) {
        return bin_point(
            alpha, reps.size(),
            [&](std::size_t r) { return sign * reps[r][b].displacement; },
            [&](std::size_t r) { return reps[r][b].elapsed; });
    };

    OutputSet outs;
    {
        auto os = outs.open(args.out + ".csv");
        os << "bin_index,alpha_mean,elapsed";
        if (left) os << ",v_minus,v_minus_se,restarts_minus";
        if (right) os << ",v_plus,v_plus_se,restarts_plus";
        os << "\n";
        for (int b = 0; b < plan.bins; ++b) {
            EdgeBin m;
            for (const auto& rep : (left ? lrep : rrep)) m.merge(rep[b]);
            const double alpha = m.alpha_mean();
            os << b << "," << fmt(alpha) << "," << fmt(m.elapsed);
            if (left) {
                CurvePoint v = side_point(lrep, b, 1.0, alpha);
                std::uint64_t rs = 0;
                for (const auto& rep : lrep) rs += rep[b].restarts;
                os << "," << fmt(v.value) << "," << fmt(v.stderr_) << "," << rs;
            }
            if (right) {
                CurvePoint v = side_point(rrep, b, -1.0, alpha);
                std::uint64_t rs = 0;
                for (const auto& rep : rrep) rs += rep[b].restarts;
                os << "," << fmt(v.value) << "," << fmt(v.stderr_) << "," << rs;
            }
            os << "\n";
        }
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(outs, args.out + ".manifest", args, plan, wall, {"side=" + side_arg});
    return 0;
}

int cmd_exact(const std::string& model, const std::string& rep, int n, double alpha,
              const std::string& sector_arg, bool check_duality,
              const std::string& pattern_csv) {
    if (check_duality) {
        const double res = duality_residual(parse_family(model), n, alpha);
        std::cout << "duality_residual=" << fmt(res) << "\n";
        return res < 1e-12 ? 0 : 3;
    }
    Sector sector = Sector::Full;
    if (sector_arg == "odd") sector = Sector::Odd;
    else if (sector_arg == "even") sector = Sector::Even;
    else if (sector_arg != "full")
        throw CLI::ValidationError("--sector", "expected odd, even or full");

    std::vector<Pattern> patterns;
    std::stringstream ss(pattern_csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) patterns.push_back(Pattern::parse(tok));

    const ModelSpec spec = make_spec(parse_family(model), parse_rep(rep), alpha);
    ExactSystem sys = build_generator(spec, n, sector);
    StationaryLaw law;
    try {
        law = stationary(sys);
    } catch (const ReducibleError& e) {
        // fall back to the class of the canonical seed state
        const std::uint32_t seed_mask = sector == Sector::Even ? 3u : 1u;
        sys = restrict_to_class(sys, seed_mask);
        law = stationary(sys);
        std::cout << "restricted_to_class_of=" << seed_mask << "\n";
    }
    const ExactObservables obs = exact_observables(sys, law, patterns);
    std::cout << "states=" << sys.num_states() << "\n";
    std::cout << "residual=" << fmt(law.residual) << "\n";
    std::cout << "mean_particles=" << fmt(obs.mean_particles) << "\n";
    for (std::size_t k = 0; k < obs.prob_k.size(); ++k)
        if (obs.prob_k[k] > 0) std::cout << "prob_" << k << "=" << fmt(obs.prob_k[k]) << "\n";
    for (std::size_t p = 0; p < patterns.size(); ++p)
        std::cout << "f_" << patterns[p].text << "=" << fmt(obs.harmonic[p]) << "\n";
    return 0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

int cmd_fit(const std::string& input, const std::string& model) {
    if (model != "linfrac")
        throw CLI::ValidationError("--model", "only 'linfrac' is supported");
    std::ifstream is(input);
    if (!is) throw std::runtime_error("cannot open " + input);
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("empty input " + input);
    const auto cols = split_csv_line(header);
    int ia = -1, iv = -1, ie = -1;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == "alpha_mean" || (ia < 0 && cols[i] == "alpha")) ia = static_cast<int>(i);
        if (cols[i] == "rho_hat" || (iv < 0 && (cols[i] == "rho" || cols[i] == "value")))
            iv = static_cast<int>(i);
        if (cols[i] == "rho_se" || (ie < 0 && (cols[i] == "stderr" || cols[i] == "se")))
            ie = static_cast<int>(i);
    }
    if (ia < 0 || iv < 0)
        throw std::runtime_error("input needs alpha and rho columns, got: " + header);

    std::vector<CurvePoint> points;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (static_cast<int>(f.size()) <= std::max(ia, iv)) continue;
        CurvePoint p;
        p.alpha = std::strtod(f[ia].c_str(), nullptr);
        p.value = std::strtod(f[iv].c_str(), nullptr);
        if (ie >= 0 && ie < static_cast<int>(f.size()))
            p.stderr_ = std::strtod(f[ie].c_str(), nullptr);
        if (std::isfinite(p.alpha) && std::isfinite(p.value) && p.value > 0)
            points.push_back(p);
    }
    const FitResult fit = fit_linear_fractional(points);
    if (fit.degenerate) {
        std::cout << "degenerate=1\n";
        return 0;
    }
    std::cout << "c1=" << fmt(fit.c1) << "\n";
    std::cout << "c2=" << fmt(fit.c2) << "\n";
    std::cout << "alpha_c=" << fmt(fit.alpha_c) << "\n";
    std::cout << "residual_rms=" << fmt(fit.residual_rms) << "\n";
    std::cout << "points=" << points.size() << "\n";
    return 0;
}

int cmd_bitmap(const std::string& model, const std::string& rep, double alpha, int width,
               double duration, double sample_dt, int n_sites, std::uint64_t seed,
               const std::string& init, const std::string& out) {
    const ModelSpec spec = make_spec(parse_family(model), parse_rep(rep), alpha);
    if (n_sites <= 0) n_sites = std::max(4 * width, 64);
    const Bitmap bmp = render_spacetime(spec, alpha, n_sites, width, duration, sample_dt,
                                        seed, parse_init(init));
    OutputSet outs;
    {
        auto os = outs.open(out);
        write_pgm(bmp, os);
    }
    std::cout << "rows=" << bmp.rows << "\n";
    std::cout << "width=" << bmp.width << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rebellious voter / branching-annihilating particle system toolkit"};
    app.require_subcommand(1);

    PlanArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "density and particle-count-fraction curves");
    sweep_args.add_to(sweep, "sweep");

    PlanArgs harm_args;
    std::string harm_patterns;
    auto* harmonic = app.add_subcommand("harmonic", "harmonic-function estimates f_x(alpha)");
    harm_args.add_to(harmonic, "harmonic");
    auto* harm_rep_opt = harmonic->get_option("--rep");
    harmonic->add_option("--patterns", harm_patterns, "comma-separated patterns, e.g. 1,11,101")
        ->required();

    PlanArgs edge_args;
    std::string edge_side = "both";
    auto* edge = app.add_subcommand("edge", "interface edge speeds (--N is the frame window)");
    edge_args.add_to(edge, "edge");
    edge->add_option("--side", edge_side, "left|right|both");

    std::string ex_model = "one-sided", ex_rep = "interface", ex_sector = "odd";
    std::string ex_patterns;
    int ex_n = 6;
    double ex_alpha = 0.5;
    bool ex_check = false;
    auto* exact = app.add_subcommand("exact", "exact stationary law on a small ring");
    exact->add_option("--model", ex_model, "model family");
    exact->add_option("--rep", ex_rep, "representation");
    exact->add_option("--N", ex_n, "ring size")->required();
    exact->add_option("--alpha", ex_alpha, "alpha");
    exact->add_option("--sector", ex_sector, "odd|even|full");
    exact->add_option("--patterns", ex_patterns, "patterns for exact f_x");
    exact->add_flag("--check-duality", ex_check, "verify the duality identity; exit 3 on failure");

    std::string fit_input, fit_model = "linfrac";
    auto* fit = app.add_subcommand("fit", "fit a density curve");
    fit->add_option("--input", fit_input, "CSV with alpha and rho columns")->required();
    fit->add_option("--model", fit_model, "fit family (linfrac)");

    std::string bm_model = "two-sided", bm_rep = "interface", bm_init = "single";
    std::string bm_out = "spacetime.pgm";
    int bm_w = 500, bm_n = 0;
    double bm_alpha = 0.4, bm_t = 1800, bm_dt = 1.0;
    auto* bitmap = app.add_subcommand("bitmap", "space-time PGM plot");
    bitmap->add_option("--model", bm_model, "model family");
    bitmap->add_option("--rep", bm_rep, "representation");
    bitmap->add_option("--alpha", bm_alpha, "alpha");
    bitmap->add_option("--W", bm_w, "window width in sites");
    bitmap->add_option("--T", bm_t, "total time");
    bitmap->add_option("--dt", bm_dt, "sampling interval (one row per sample)");
    bitmap->add_option("--N", bm_n, "ring size (default 4W)");
    std::uint64_t bm_seed = 1;
    bitmap->add_option("--seed", bm_seed, "seed");
    bitmap->add_option("--init", bm_init, "single|count|half");
    bitmap->add_option("--out", bm_out, "output PGM path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (harmonic->parsed())
            return cmd_harmonic(harm_args, harm_patterns, harm_rep_opt->count() > 0);
        if (edge->parsed()) return cmd_edge(edge_args, edge_side);
        if (exact->parsed())
            return cmd_exact(ex_model, ex_rep, ex_n, ex_alpha, ex_sector, ex_check, ex_patterns);
        if (fit->parsed()) return cmd_fit(fit_input, fit_model);
        if (bitmap->parsed())
            return cmd_bitmap(bm_model, bm_rep, bm_alpha, bm_w, bm_t, bm_dt, bm_n, bm_seed,
                              bm_init, bm_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
