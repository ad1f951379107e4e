#include "report.hpp"

#include <cmath>
#include <fstream>

#include <mapfunc/error.hpp>
#include <mapfunc/model_io.hpp>

namespace mapfunc::cli {

Json number(double v)
{
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "+inf" : "-inf";
}

Json numbers(const std::vector<double>& v)
{
    Json out = Json::array();
    for (double x : v)
        out.push_back(number(x));
    return out;
}

Json to_json(const Drift& k)
{
    switch (k.kind) {
        case Drift::Kind::Finite: return k.value;
        case Drift::Kind::PlusInfinity: return "+inf";
        case Drift::Kind::MinusInfinity: return "-inf";
        case Drift::Kind::Undefined: return "undefined";
    }
    return nullptr;
}

Json to_json(const ConvergenceVerdict& v)
{
    Json j;
    j["tag"] = to_string(v.tag);
    j["K"] = to_json(v.k);
    if (v.evidence) {
        auto const& e = *v.evidence;
        j["ladder"] = numbers(e.ladder);
        j["iPlus"] = numbers(e.iPlus);
        j["iMinus"] = numbers(e.iMinus);
        j["verdicts"] = {{"plus", to_string(e.plus)}, {"minus", to_string(e.minus)}};
        j["slopes"] = {{"plus", number(e.slopePlus)}, {"minus", number(e.slopeMinus)}};
    } else {
        j["ladder"] = nullptr;
        j["iPlus"] = nullptr;
        j["iMinus"] = nullptr;
        j["verdicts"] = nullptr;
    }
    return j;
}

Json to_json(const CramerRoot& r)
{
    Json j;
    j["status"] = to_string(r.status);
    if (r.found()) {
        j["kappa"] = r.kappa;
        j["lambdaAtKappa"] = r.residual;
    }
    Json scan = Json::array();
    for (auto const& [z, l] : r.scan)
        scan.push_back({number(z), number(l)});
    j["scan"] = std::move(scan);
    return j;
}

Json to_json(const TailConstantFit& f)
{
    Json j;
    j["c"] = number(f.c);
    j["ci"] = {number(f.ci.lo), number(f.ci.hi)};
    j["spread"] = number(f.spread);
    j["trendSlope"] = number(f.trendSlope);
    j["nonPlateau"] = f.nonPlateau;
    return j;
}

Json to_json(const SubexpClass& c)
{
    Json j;
    j["dominantComponent"] = to_string(c.dominant);
    Json b = Json::array();
    if (c.inB[0])
        b.push_back("+");
    if (c.inB[1])
        b.push_back("-");
    j["dominantSet"] = std::move(b);
    Json members = Json::array();
    for (auto const& m : c.members) {
        Json mj;
        mj["component"] = to_string(m.which);
        mj["tailClass"] = to_string(m.tailClass);
        mj["law"] = m.heavy() ? Json(m.law.describe()) : Json(nullptr);
        mj["weight"] = number(m.weight);
        members.push_back(std::move(mj));
    }
    j["members"] = std::move(members);
    return j;
}

Json to_json(const SubexpReport& r)
{
    Json j = to_json(r.cls);
    j["K"] = number(r.k);
    j["meanT2"] = number(r.meanT2);
    j["n"] = r.n;
    j["diverged"] = r.diverged;
    Json pts = Json::array();
    for (auto const& p : r.points) {
        pts.push_back({{"x", number(p.x)},
                       {"empirical", number(p.empirical)},
                       {"predicted", number(p.predicted)},
                       {"ratio", number(p.ratio)},
                       {"exceedances", p.exceedances},
                       {"central", p.central}});
    }
    j["ratioCurve"] = std::move(pts);
    j["inBand"] = r.inBand;
    j["trending"] = r.trending;
    j["trendSlope"] = number(r.trendSlope);
    j["verdict"] = r.pass ? "PASS" : "FAIL";
    return j;
}

Json to_json(const ExcursionStats& s)
{
    Json j;
    j["epsilon"] = number(s.eps);
    j["levelA"] = number(s.levelA);
    j["C"] = number(s.c);
    j["terminationGap"] = number(s.terminationGap);
    j["gapMethod"] = s.gapMethod;
    j["paths"] = s.paths.size();
    j["incomplete"] = s.incomplete;
    Json eta = Json::object();
    Json se = Json::object();
    for (auto from : {State::Plus, State::Minus}) {
        std::string const f(to_string(from));
        for (int to = 0; to < 3; ++to) {
            std::string const key = f + (to == 0 ? "+" : to == 1 ? "-" : "end");
            eta[key] = s.eta(from, to);
            se[key] = s.eta_se(from, to);
        }
    }
    j["eta"] = std::move(eta);
    j["etaStdError"] = std::move(se);
    j["nHistogram"] = s.nHistogram;
    j["meanN"] = s.mean_n();
    j["continuationBound"] = s.continuation_bound();
    j["gridDelta"] = s.gridDelta ? number(*s.gridDelta) : Json(nullptr);
    return j;
}

Json to_json(const WillekensResult& w)
{
    return {{"lhs", number(w.lhs)}, {"rhs", number(w.rhs)}, {"seLhs", number(w.seLhs)},
            {"seRhs", number(w.seRhs)}, {"ok", w.ok}};
}

Json to_json(const TailsumReport& t)
{
    Json pts = Json::array();
    for (auto const& p : t.points)
        pts.push_back({{"x", number(p.x)}, {"lhs", number(p.lhs)}, {"rhs", number(p.rhs)}, {"ratio", number(p.ratio)}});
    Json j;
    j["points"] = std::move(pts);
    j["longTailed"] = t.longTailed;
    if (!t.longTailed)
        j["caveat"] = "NotLongTailed";
    j["exactTerms"] = t.exactTerms;
    return j;
}

Json to_json(const LogABoundResult& r)
{
    return {{"paths", r.paths}, {"violations", r.violations}, {"C", number(r.c)}, {"maxExcess", number(r.maxExcess)}};
}

Json to_json(const AffineReport& r)
{
    return {{"ksStatistic", number(r.ks.statistic)}, {"pValue", number(r.ks.pValue)}, {"level", r.level},
            {"pass", r.pass}};
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace mapfunc::cli
