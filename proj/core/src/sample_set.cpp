#include "mapfunc/sample_set.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mapfunc/error.hpp"
#include "mapfunc/model_io.hpp"

namespace mapfunc {

namespace {
constexpr char magic[4] = {'M', 'F', 'S', '1'};

std::string read_all(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}
}  // namespace

SampleSet::SampleSet(std::vector<double> values, std::string label, std::string model_hash, std::uint64_t master_seed)
    : values_(std::move(values)), label_(std::move(label)), model_hash_(std::move(model_hash)),
      master_seed_(master_seed)
{
    for (double v : values_)
        require(std::isfinite(v), ErrorCode::InvalidArgument, "sample values must be finite");
}

std::span<const double> SampleSet::sorted() const
{
    std::call_once(cache_->once, [this] {
        cache_->data = values_;
        std::sort(cache_->data.begin(), cache_->data.end());
    });
    return cache_->data;
}

void SampleSet::write_csv(const std::filesystem::path& path) const
{
    auto out = open_out(path);
    out << "# mapfunc samples v1\n";
    out << "# label: " << label_ << '\n';
    out << "# model_hash: " << model_hash_ << '\n';
    out << "# master_seed: " << master_seed_ << '\n';
    out << "# count: " << values_.size() << '\n';
    out << "value\n";
    for (double v : values_)
        out << format_double(v) << '\n';
}

void SampleSet::write_binary(const std::filesystem::path& path) const
{
    static_assert(std::endian::native == std::endian::little, "binary sample files assume little-endian hosts");
    {
        auto out = open_out(path);
        out.write(magic, sizeof magic);
        out.write(reinterpret_cast<const char*>(values_.data()),
                  static_cast<std::streamsize>(values_.size() * sizeof(double)));
    }
    nlohmann::ordered_json meta;
    meta["format"] = "MFS1";
    meta["label"] = label_;
    meta["model_hash"] = model_hash_;
    meta["master_seed"] = master_seed_;
    meta["count"] = values_.size();
    auto side = open_out(path.string() + ".json");
    side << meta.dump(2) << '\n';
}

SampleSet SampleSet::read_csv(const std::filesystem::path& path)
{
    std::string const text = read_all(path);
    std::istringstream in(text);
    std::string line, label, hash;
    std::uint64_t seed = 0;
    long long declared = -1;
    std::vector<double> values;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line == "value")
            continue;
        if (line.front() == '#') {
            auto const colon = line.find(':');
            if (colon == std::string::npos)
                continue;
            std::string key = line.substr(2, colon - 2);
            std::string val = line.substr(std::min(line.size(), colon + 2));
            if (key == "label")
                label = val;
            else if (key == "model_hash")
                hash = val;
            else if (key == "master_seed")
                seed = std::stoull(val);
            else if (key == "count")
                declared = std::stoll(val);
            continue;
        }
        double v = 0.0;
        auto const [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc() || ptr != line.data() + line.size())
            fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": bad value '" + line + "'");
        values.push_back(v);
    }
    if (declared >= 0 && static_cast<std::size_t>(declared) != values.size())
        fail(ErrorCode::ParseError, path.string() + ": count header does not match the number of values");
    return SampleSet(std::move(values), label, hash, seed);
}

SampleSet SampleSet::read_binary(const std::filesystem::path& path)
{
    std::string const data = read_all(path);
    if (data.size() < sizeof magic || std::memcmp(data.data(), magic, sizeof magic) != 0)
        fail(ErrorCode::ParseError, path.string() + ": missing MFS1 magic");
    std::size_t const bytes = data.size() - sizeof magic;
    if (bytes % sizeof(double) != 0)
        fail(ErrorCode::ParseError, path.string() + ": truncated value array");
    std::vector<double> values(bytes / sizeof(double));
    std::memcpy(values.data(), data.data() + sizeof magic, bytes);
    std::string label, hash;
    std::uint64_t seed = 0;
    std::filesystem::path const side = path.string() + ".json";
    if (std::filesystem::exists(side)) {
        auto const meta = nlohmann::json::parse(read_all(side));
        label = meta.value("label", "");
        hash = meta.value("model_hash", "");
        seed = meta.value("master_seed", std::uint64_t{0});
        if (meta.contains("count") && meta["count"].get<std::size_t>() != values.size())
            fail(ErrorCode::ParseError, side.string() + ": count does not match the binary file");
    }
    return SampleSet(std::move(values), label, hash, seed);
}

SampleSet SampleSet::read(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::IoError, "cannot open " + path.string());
    char head[4] = {};
    in.read(head, 4);
    if (in.gcount() == 4 && std::memcmp(head, magic, 4) == 0)
        return read_binary(path);
    return read_csv(path);
}

}  // namespace mapfunc
