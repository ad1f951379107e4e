#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <mapfunc/cramer.hpp>
#include <mapfunc/finiteness.hpp>
#include <mapfunc/heavytail.hpp>
#include <mapfunc/sim.hpp>

namespace mapfunc::cli {

using Json = nlohmann::ordered_json;

//! Finite values as numbers; infinities and NaN as strings, which JSON cannot hold.
Json number(double v);
Json numbers(const std::vector<double>& v);

Json to_json(const Drift& k);
Json to_json(const ConvergenceVerdict& v);
Json to_json(const CramerRoot& r);
Json to_json(const TailConstantFit& f);
Json to_json(const SubexpClass& c);
Json to_json(const SubexpReport& r);
Json to_json(const ExcursionStats& s);
Json to_json(const WillekensResult& w);
Json to_json(const TailsumReport& t);
Json to_json(const LogABoundResult& r);
Json to_json(const AffineReport& r);

//! Pretty JSON with a trailing newline.
std::string dump(const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mapfunc::cli
