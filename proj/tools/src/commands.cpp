#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include <mapfunc/error.hpp>
#include <mapfunc/model_io.hpp>
#include <mapfunc/parallel.hpp>

#include "report.hpp"

namespace mapfunc::cli {

namespace {

std::uint64_t resolve_seed(const Options& opt)
{
    if (opt.seed)
        return *opt.seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

SimConfig sim_config(const Options& opt, std::uint64_t seed)
{
    SimConfig cfg;
    cfg.masterSeed = seed;
    if (opt.grid)
        cfg.gridStep = *opt.grid;
    cfg.validate();
    return cfg;
}

SurvivalWindow parse_window(const Options& opt)
{
    SurvivalWindow w;
    if (!opt.window)
        return w;
    auto const& s = *opt.window;
    auto const comma = s.find(',');
    require(comma != std::string::npos, ErrorCode::InvalidArgument, "--window expects shallow,deep");
    try {
        w.shallow = std::stod(s.substr(0, comma));
        w.deep = std::stod(s.substr(comma + 1));
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, "--window expects two numbers, got '" + s + "'");
    }
    w.validate();
    return w;
}

Json header(const char* command, const Options& opt, const MapModel& model, std::uint64_t seed)
{
    Json j;
    j["command"] = command;
    j["model"] = opt.model.string();
    j["modelHash"] = model_hash_hex(model);
    j["seed"] = seed;
    return j;
}

void emit(const Json& j, const Options& opt, const char* file, std::ostream& out)
{
    auto const text = dump(j);
    out << text;
    if (opt.out) {
        std::filesystem::create_directories(*opt.out);
        write_text(*opt.out / file, text);
    }
}

std::string fmt(double v)
{
    return format_double(v);
}

std::string fmt(const Drift& k)
{
    return k.finite() ? fmt(k.value) : k.describe();
}

std::string domain_text(const MgfDomain& d)
{
    return "(" + fmt(d.lo) + ", " + fmt(d.hi) + ")";
}

double negative_k_or_throw(const MapModel& model)
{
    auto const k = drift_K(model);
    require(k.defined() && k.sign() < 0, ErrorCode::PositiveDrift, "needs K < 0, got K = " + k.describe());
    require(k.finite(), ErrorCode::InvalidArgument, "needs finite K, got K = " + k.describe());
    return k.value;
}

//! Convergent heavy-tailed draws legitimately exceed the default divergence threshold.
bool heavy_tailed(const MapModel& model)
{
    try {
        strong_subexp_classify(model);
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

int cmd_describe(const Options& opt, std::ostream& out, std::ostream&)
{
    auto const model = load_model(opt.model);
    auto const& p = model.params();
    auto const k = drift_K(model);
    out << "model: " << opt.model.string() << "\n";
    out << "hash: " << model_hash_hex(model) << "\n";
    out << "qPlus: " << fmt(p.qPlus) << "\n";
    out << "qMinus: " << fmt(p.qMinus) << "\n";
    out << "killing: " << fmt(p.killing) << "\n";
    out << "levy.plus: " << p.levyPlus.describe() << "\n";
    out << "levy.minus: " << p.levyMinus.describe() << "\n";
    out << "jump.plus: " << p.uPlus.describe() << "\n";
    out << "jump.minus: " << p.uMinus.describe() << "\n";
    out << "E[T2]: " << fmt(model.mean_t2()) << "\n";
    out << "E[xi_T2]: " << fmt(mean_xi_t2(model)) << "\n";
    out << "K: " << fmt(k) << "\n";
    out << "degenerate: " << (is_degenerate(model) ? "true" : "false") << "\n";
    out << "domain.levy.plus: " << domain_text(p.levyPlus.domain()) << "\n";
    out << "domain.levy.minus: " << domain_text(p.levyMinus.domain()) << "\n";
    out << "domain.jump.plus: " << domain_text(p.uPlus.mgf_domain()) << "\n";
    out << "domain.jump.minus: " << domain_text(p.uMinus.mgf_domain()) << "\n";
    auto const dom = matrix_exponent_domain(model);
    out << "domain.F: " << domain_text(dom) << "\n";
    out << "nonlattice: " << (lattice_guard(model) ? "true" : "false") << "\n";
    out << "lambda scan:\n";
    if (model.killing() > 0.0) {
        out << "  unavailable with killing\n";
        return Exit::ok;
    }
    for (int i = -8; i <= 16; ++i) {
        double const z = 0.25 * i;
        auto const l = leading_eigenvalue(model, z);
        out << "  " << fmt(z) << " " << (l ? fmt(*l) : std::string("undefined")) << "\n";
    }
    return Exit::ok;
}

int cmd_classify(const Options& opt, std::ostream& out, std::ostream&)
{
    auto const model = load_model(opt.model);
    auto const seed = resolve_seed(opt);
    auto const cfg = sim_config(opt, seed);
    ClassifyOptions co;
    co.samples = opt.n.value_or(co.samples);
    co.threads = resolve_threads(opt.threads);
    auto const v = classify_convergence(model, cfg, co);
    Json j = header("classify", opt, model, seed);
    j["n"] = co.samples;
    j.update(to_json(v));
    emit(j, opt, "classify.json", out);
    if (is_convergent(v.tag))
        return Exit::ok;
    if (is_divergent(v.tag))
        return Exit::divergent;
    return Exit::inconclusive;
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err)
{
    require(opt.out.has_value(), ErrorCode::InvalidArgument, "simulate needs --out");
    auto const start = std::chrono::steady_clock::now();
    auto const model = load_model(opt.model);
    auto const seed = resolve_seed(opt);
    auto cfg = sim_config(opt, seed);
    if (heavy_tailed(model))
        cfg.divergeThreshold = 1e300;
    int const threads = resolve_threads(opt.threads);
    ClassifyOptions co;
    co.threads = threads;
    auto const v = classify_convergence(model, cfg, co);
    if (is_divergent(v.tag) && !opt.force) {
        err << "refused: model classified " << to_string(v.tag) << "; pass --force to sample anyway\n";
        return Exit::divergent;
    }
    std::size_t const n = opt.n.value_or(100000);
    auto const s = sample_functionals_set(model, cfg, n, threads);
    auto const a = s.finite_a(model, seed);
    auto const b = s.finite_b(model, seed);
    std::filesystem::create_directories(*opt.out);
    a.write_csv(*opt.out / "A.csv");
    b.write_csv(*opt.out / "B.csv");

    Json j = header("simulate", opt, model, seed);
    j["verdict"] = to_string(v.tag);
    j["forced"] = opt.force && is_divergent(v.tag);
    j["n"] = n;
    j["gridStep"] = cfg.gridStep;
    j["truncWeight"] = cfg.truncWeight;
    j["maxCycles"] = cfg.maxCycles;
    j["divergeThreshold"] = cfg.divergeThreshold;
    j["counts"] = {{"A", a.count()}, {"B", b.count()}};
    j["diverged"] = {{"A", s.divergedA}, {"B", s.divergedB}};
    double const nn = n ? static_cast<double>(n) : 1.0;
    j["divergenceFraction"] = {{"A", static_cast<double>(s.divergedA) / nn}, {"B", static_cast<double>(s.divergedB) / nn}};
    j["disagreements"] = s.disagreements;
    j["files"] = {{"A", "A.csv"}, {"B", "B.csv"}, {"timing", "timing.json"}};
    emit(j, opt, "manifest.json", out);

    double const wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(*opt.out / "timing.json", dump(Json{{"wallSeconds", wall}, {"threads", threads}}));
    return Exit::ok;
}

int cmd_cramer(const Options& opt, std::ostream& out, std::ostream& err)
{
    auto const model = load_model(opt.model);
    auto const seed = resolve_seed(opt);
    Json j = header("cramer", opt, model, seed);
    auto const k = drift_K(model);
    j["K"] = to_json(k);
    if (!k.defined() || k.sign() >= 0 || model.killing() > 0.0) {
        err << "cramer needs K < 0 and no killing, got K = " << k.describe() << "\n";
        return Exit::divergent;
    }
    auto const root = find_cramer_root(model);
    j["root"] = to_json(root);
    if (!root.found()) {
        emit(j, opt, "cramer.json", out);
        err << "no Cramér root: " << to_string(root.status) << "\n";
        return Exit::no_root;
    }
    double const kappa = root.kappa;
    j["kappa"] = kappa;
    try {
        j["meanOneResidual"] = verify_mean_one(model, kappa);
    } catch (const Error& e) {
        j["meanOneResidual"] = nullptr;
        j["meanOneError"] = e.what();
    }
    auto const mc = check_moment_condition(model, kappa);
    j["momentConditionOk"] = mc.ok;
    j["momentEpsilon"] = mc.epsilonUsed;
    j["nonlattice"] = lattice_guard(model);

    auto const window = parse_window(opt);
    j["plateauWindow"] = {window.shallow, window.deep};
    TailConstantOptions to;
    to.window = window;
    to.seed = seed;
    to.threads = resolve_threads(opt.threads);

    SampleSet a;
    std::optional<SampleSet> b;
    if (opt.samples) {
        a = SampleSet::read(*opt.samples);
        j["samples"] = opt.samples->string();
    } else {
        auto cfg = sim_config(opt, seed);
        cfg.divergeThreshold = 1e300;
        std::size_t const n = opt.n.value_or(1000000);
        auto const s = sample_functionals_set(model, cfg, n, to.threads);
        a = s.finite_a(model, seed);
        b = s.finite_b(model, seed);
        j["n"] = n;
        j["gridStep"] = cfg.gridStep;
        j["diverged"] = {{"A", s.divergedA}, {"B", s.divergedB}};
    }
    auto const grid = tail_window_grid(a, to);
    auto const fa = estimate_tail_constant_on_grid(a, kappa, grid, false, to);
    j["cA"] = to_json(fa);
    std::optional<TailConstantFit> fbp, fbm;
    if (b) {
        fbp = estimate_tail_constant_on_grid(*b, kappa, grid, false, to);
        fbm = estimate_tail_constant_on_grid(*b, kappa, grid, true, to);
        j["cBplus"] = to_json(*fbp);
        j["cBminus"] = to_json(*fbm);
    } else {
        j["cBplus"] = nullptr;
        j["cBminus"] = nullptr;
    }
    auto const slope = loglog_tail_slope(a, window);
    j["tailSlope"] = {{"value", slope.value}, {"stdError", slope.stdError}, {"expected", -kappa}};
    emit(j, opt, "cramer.json", out);

    if (opt.out) {
        std::ostringstream csv;
        csv << "t,tkS_A" << (b ? ",tkS_Bplus,tkS_Bminus" : "") << "\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv << fmt(grid[i]) << "," << fmt(fa.curve[i]);
            if (b)
                csv << "," << fmt(fbp->curve[i]) << "," << fmt(fbm->curve[i]);
            csv << "\n";
        }
        write_text(*opt.out / "cramer_fit.csv", csv.str());
    }
    return Exit::ok;
}

int cmd_subexp(const Options& opt, std::ostream& out, std::ostream&)
{
    auto const model = load_model(opt.model);
    auto const seed = resolve_seed(opt);
    auto const cfg = sim_config(opt, seed);
    double const k = negative_k_or_throw(model);
    SubexpOptions so;
    so.threads = resolve_threads(opt.threads);
    std::size_t const n = opt.n.value_or(1000000);
    auto const rep = subexp_compare(model, cfg, n, so);
    Json j = header("subexp", opt, model, seed);
    j.update(to_json(rep));

    std::optional<ExcursionStats> ex;
    if (opt.diagnose) {
        ExcursionOptions eo;
        eo.eps = -0.5 * k;
        eo.levelA = 4.0;
        eo.nPaths = 1000;
        eo.threads = so.threads;
        eo.gridSensitivity = true;
        ex = excursion_decompose(model, cfg, eo);
        j["excursions"] = to_json(*ex);
    }
    emit(j, opt, "subexp.json", out);
    if (opt.out) {
        std::ostringstream csv;
        csv << "x,ratio\n";
        for (auto const& p : rep.points)
            csv << fmt(p.x) << "," << fmt(p.ratio) << "\n";
        write_text(*opt.out / "subexp_ratio.csv", csv.str());
        if (ex) {
            std::ostringstream h;
            h << "n,count\n";
            for (std::size_t i = 0; i < ex->nHistogram.size(); ++i)
                h << i << "," << ex->nHistogram[i] << "\n";
            write_text(*opt.out / "excursion_hist.csv", h.str());
        }
    }
    return rep.pass ? Exit::ok : Exit::check_failed;
}

int cmd_checks(const Options& opt, std::ostream& out, std::ostream& err)
{
    auto const model = load_model(opt.model);
    auto const seed = resolve_seed(opt);
    auto const cfg = sim_config(opt, seed);
    int const threads = resolve_threads(opt.threads);
    std::size_t const n = opt.n.value_or(20000);
    auto const& p = model.params();
    auto const k = drift_K(model);
    bool const negative_k = k.finite() && k.value < 0.0 && model.killing() == 0.0;

    Json checks = Json::array();
    std::vector<std::string> failed;
    auto record = [&](std::string name, bool pass, Json details) {
        if (!pass)
            failed.push_back(name);
        checks.push_back({{"name", std::move(name)}, {"status", pass ? "PASS" : "FAIL"}, {"details", std::move(details)}});
    };
    auto skip = [&](std::string name, std::string why) {
        checks.push_back({{"name", std::move(name)}, {"status", "SKIPPED"}, {"details", {{"reason", std::move(why)}}}});
    };

    for (auto s : {State::Plus, State::Minus}) {
        std::string const name = std::string("willekens.") + (s == State::Plus ? "plus" : "minus");
        auto const w = willekens_check(model.levy(s), model.rate(s), 2.0, 1.0, n, seed, cfg.gridStep, threads);
        record(name, w.ok, to_json(w));
    }

    if (!negative_k) {
        skip("tailsum", "needs finite K < 0 without killing");
    } else {
        std::vector<JumpLaw> laws;
        for (auto const& l : {p.uPlus, p.uMinus, p.levyPlus.cppJump, p.levyMinus.cppJump}) {
            if (l.tail_class() == TailClass::StrongSubexponential
                && std::find(laws.begin(), laws.end(), l) == laws.end())
                laws.push_back(l);
        }
        if (laws.empty())
            skip("tailsum", "no long-tailed component");
        for (auto const& l : laws) {
            auto const t = tailsum_check(l, p.qPlus, p.qMinus, k.value, -0.5 * k.value, {1.0, 10.0, 100.0, 1000.0}, n,
                                         seed, 100, threads);
            bool const pass = std::fabs(t.points.back().ratio - 1.0) <= 0.05;
            Json d = to_json(t);
            d["law"] = l.describe();
            record("tailsum", pass, std::move(d));
        }
    }

    if (!negative_k) {
        skip("logA_bound", "needs finite K < 0 without killing");
    } else {
        double const eps = -0.5 * k.value;
        double const level = std::max(2.0, std::log(2.0) + std::log(std::fabs(k.value + eps)) + 0.5);
        double const c = excursion_constant(k.value, eps, level);
        auto const r = logA_bound_check(model, cfg, eps, level, 50.0, 10000,
                                        opt.corruptC ? std::optional<double>(0.5 * c) : std::nullopt, threads);
        Json d = to_json(r);
        d["epsilon"] = eps;
        d["levelA"] = level;
        d["horizon"] = 50.0;
        d["corruptedC"] = opt.corruptC;
        record("logA_bound", r.violations == 0, std::move(d));
    }

    if (model.killing() > 0.0) {
        skip("affine_fixedpoint", "needs killing q = 0");
    } else {
        try {
            auto const r = affine_fixedpoint_check(model, cfg, n, threads);
            record("affine_fixedpoint", r.pass, to_json(r));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotConvergent)
                throw;
            skip("affine_fixedpoint", e.what());
        }
    }

    Json j = header("checks", opt, model, seed);
    j["n"] = n;
    j["checks"] = std::move(checks);
    j["pass"] = failed.empty();
    emit(j, opt, "checks.json", out);
    if (failed.empty())
        return Exit::ok;
    err << "failed checks:";
    for (auto const& f : failed)
        err << " " << f;
    err << "\n";
    return Exit::check_failed;
}

}  // namespace mapfunc::cli
