#include "mapfunc/model_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

#include "mapfunc/error.hpp"

namespace mapfunc {

namespace {

using Value = std::variant<double, std::string, bool>;

struct Entry {
    Value value;
    int line = 0;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
    std::set<std::string> used;
};

class Document {
  public:
    Document(std::string_view text, std::string_view source) : source_(source) { parse(text); }

    [[noreturn]] void error(int line, const std::string& what) const
    {
        fail(ErrorCode::ParseError, std::string(source_) + ":" + std::to_string(line) + ": " + what);
    }

    Section* find(const std::string& name)
    {
        auto it = sections_.find(name);
        return it == sections_.end() ? nullptr : &it->second;
    }

    Section& get(const std::string& name)
    {
        auto* s = find(name);
        if (!s)
            error(0, "missing section [" + name + "]");
        used_sections_.insert(name);
        return *s;
    }

    Section* get_optional(const std::string& name)
    {
        auto* s = find(name);
        if (s)
            used_sections_.insert(name);
        return s;
    }

    const Entry* entry(Section& s, const std::string& key)
    {
        auto it = s.entries.find(key);
        if (it == s.entries.end())
            return nullptr;
        s.used.insert(key);
        return &it->second;
    }

    double number(Section& s, const std::string& sname, const std::string& key, std::optional<double> fallback)
    {
        auto const* e = entry(s, key);
        if (!e) {
            if (!fallback)
                error(s.line, "[" + sname + "] missing field '" + key + "'");
            return *fallback;
        }
        if (auto const* d = std::get_if<double>(&e->value))
            return *d;
        error(e->line, "field '" + key + "' must be a number");
    }

    std::string string(Section& s, const std::string& sname, const std::string& key,
                       std::optional<std::string> fallback)
    {
        auto const* e = entry(s, key);
        if (!e) {
            if (!fallback)
                error(s.line, "[" + sname + "] missing field '" + key + "'");
            return *fallback;
        }
        if (auto const* v = std::get_if<std::string>(&e->value))
            return *v;
        error(e->line, "field '" + key + "' must be a string");
    }

    bool boolean(Section& s, const std::string& key, bool fallback)
    {
        auto const* e = entry(s, key);
        if (!e)
            return fallback;
        if (auto const* v = std::get_if<bool>(&e->value))
            return *v;
        error(e->line, "field '" + key + "' must be true or false");
    }

    //! Reject sections and keys that were never consumed.
    void check_unused()
    {
        for (auto& [name, sec] : sections_) {
            if (!used_sections_.count(name))
                error(sec.line, "unknown section [" + name + "]");
            for (auto& [key, e] : sec.entries)
                if (!sec.used.count(key))
                    error(e.line, "unknown field '" + key + "' in [" + name + "]");
        }
    }

  private:
    std::string_view source_;
    std::map<std::string, Section> sections_;
    std::set<std::string> used_sections_;

    static std::string_view trim(std::string_view s)
    {
        auto const b = s.find_first_not_of(" \t\r");
        if (b == std::string_view::npos)
            return {};
        auto const e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static std::string_view strip_comment(std::string_view s)
    {
        bool in_string = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"')
                in_string = !in_string;
            else if (s[i] == '#' && !in_string)
                return s.substr(0, i);
        }
        return s;
    }

    Value parse_value(std::string_view raw, const std::string& key, int line) const
    {
        if (raw.empty())
            error(line, "field '" + key + "' has no value");
        if (raw.front() == '"') {
            if (raw.size() < 2 || raw.back() != '"')
                error(line, "field '" + key + "' has an unterminated string");
            return std::string(raw.substr(1, raw.size() - 2));
        }
        if (raw == "true")
            return true;
        if (raw == "false")
            return false;
        std::string_view num = raw;
        if (!num.empty() && num.front() == '+')
            num.remove_prefix(1);
        if (num == "inf" || num == "-inf" || num == "nan" || num == "-nan")
            error(line, "field '" + key + "' has non-finite number '" + std::string(raw) + "'");
        double v = 0.0;
        auto const [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
        if (ec != std::errc() || ptr != num.data() + num.size())
            error(line, "field '" + key + "': cannot parse value '" + std::string(raw) + "'");
        return v;
    }

    void parse(std::string_view text)
    {
        Section* current = nullptr;
        int line_no = 0;
        while (!text.empty()) {
            auto const nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
            ++line_no;
            line = trim(strip_comment(line));
            if (line.empty())
                continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    error(line_no, "malformed section header");
                std::string name(trim(line.substr(1, line.size() - 2)));
                if (name.empty())
                    error(line_no, "empty section name");
                if (sections_.count(name))
                    error(line_no, "duplicate section [" + name + "]");
                current = &sections_[name];
                current->line = line_no;
                continue;
            }
            auto const eq = line.find('=');
            if (eq == std::string_view::npos)
                error(line_no, "expected 'key = value'");
            if (!current)
                error(line_no, "field outside of any section");
            std::string key(trim(line.substr(0, eq)));
            if (key.empty())
                error(line_no, "empty key");
            if (current->entries.count(key))
                error(line_no, "duplicate field '" + key + "'");
            current->entries[key] = Entry{parse_value(trim(line.substr(eq + 1)), key, line_no), line_no};
        }
    }
};

JumpLaw read_jump(Document& doc, const std::string& name)
{
    Section& s = doc.get(name);
    std::string const type = doc.string(s, name, "type", std::nullopt);
    auto const kind = jump_kind_from_string(type);
    if (!kind)
        doc.error(s.entries.at("type").line, "unknown jump type '" + type + "'");
    auto num = [&](const char* key) { return doc.number(s, name, key, std::nullopt); };
    bool const negated = doc.boolean(s, "negated", false);
    try {
        JumpLaw::Params params;
        switch (*kind) {
            case JumpKind::Deterministic: params = law::Deterministic{num("c")}; break;
            case JumpKind::Gaussian: params = law::Gaussian{num("mean"), num("stdev")}; break;
            case JumpKind::ExpPositive: params = law::ExpPositive{num("rate")}; break;
            case JumpKind::ExpNegative: params = law::ExpNegative{num("rate")}; break;
            case JumpKind::Laplace: params = law::Laplace{num("rate")}; break;
            case JumpKind::ParetoPositive: params = law::ParetoPositive{num("index"), num("scale")}; break;
            case JumpKind::LogNormal: params = law::LogNormal{num("logMean"), num("logStdev")}; break;
        }
        return JumpLaw(params, negated);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError)
            throw;
        doc.error(s.line, "[" + name + "] " + e.what());
    }
}

LevyLaw read_levy(Document& doc, const std::string& name)
{
    Section& s = doc.get(name);
    LevyLaw l;
    l.drift = doc.number(s, name, "drift", 0.0);
    l.gaussianSigma = doc.number(s, name, "gaussianSigma", 0.0);
    l.cppRate = doc.number(s, name, "cppRate", 0.0);
    std::string const jump_name = name + ".cppJump";
    if (doc.find(jump_name))
        l.cppJump = read_jump(doc, jump_name);
    else if (l.cppRate > 0.0)
        doc.error(s.line, "[" + name + "] cppRate > 0 requires a [" + jump_name + "] section");
    try {
        l.validate();
    } catch (const Error& e) {
        doc.error(s.line, "[" + name + "] " + e.what());
    }
    return l;
}

void write_jump(std::ostream& os, const std::string& section, const JumpLaw& j)
{
    os << '[' << section << "]\n";
    os << "type = \"" << to_string(j.kind()) << "\"\n";
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            auto w = [&](const char* k, double v) { os << k << " = " << format_double(v) << '\n'; };
            if constexpr (std::is_same_v<T, law::Deterministic>) {
                w("c", p.c);
            } else if constexpr (std::is_same_v<T, law::Gaussian>) {
                w("mean", p.mean);
                w("stdev", p.stdev);
            } else if constexpr (std::is_same_v<T, law::ParetoPositive>) {
                w("index", p.index);
                w("scale", p.scale);
            } else if constexpr (std::is_same_v<T, law::LogNormal>) {
                w("logMean", p.logMean);
                w("logStdev", p.logStdev);
            } else {
                w("rate", p.rate);
            }
        },
        j.params());
    os << "negated = " << (j.is_negated() ? "true" : "false") << "\n\n";
}

void write_levy(std::ostream& os, const std::string& section, const LevyLaw& l)
{
    os << '[' << section << "]\n";
    os << "drift = " << format_double(l.drift) << '\n';
    os << "gaussianSigma = " << format_double(l.gaussianSigma) << '\n';
    os << "cppRate = " << format_double(l.cppRate) << "\n\n";
    write_jump(os, section + ".cppJump", l.cppJump);
}

}  // namespace

std::string format_double(double v)
{
    char buf[64];
    auto const res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

MapModel parse_model(std::string_view text, std::string_view source)
{
    Document doc(text, source);
    ModelParams p;
    {
        Section& s = doc.get("switching");
        p.qPlus = doc.number(s, "switching", "qPlus", std::nullopt);
        p.qMinus = doc.number(s, "switching", "qMinus", std::nullopt);
        p.killing = doc.number(s, "switching", "killing", 0.0);
    }
    p.levyPlus = read_levy(doc, "levy.plus");
    p.levyMinus = read_levy(doc, "levy.minus");
    p.uPlus = read_jump(doc, "jump.plus");
    p.uMinus = read_jump(doc, "jump.minus");
    if (Section* s = doc.get_optional("start")) {
        std::string const st = doc.string(*s, "start", "startState", std::string("+"));
        if (st == "+")
            p.startState = State::Plus;
        else if (st == "-")
            p.startState = State::Minus;
        else
            doc.error(doc.entry(*s, "startState")->line, "startState must be \"+\" or \"-\"");
        p.startValue = doc.number(*s, "start", "startValue", 1.0);
    }
    doc.check_unused();
    try {
        return MapModel(p);
    } catch (const Error& e) {
        doc.error(0, e.what());
    }
}

MapModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::IoError, "cannot open model file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str(), path.string());
}

std::string to_model_text(const MapModel& model)
{
    auto const& p = model.params();
    std::ostringstream os;
    os << "[switching]\n";
    os << "qPlus = " << format_double(p.qPlus) << '\n';
    os << "qMinus = " << format_double(p.qMinus) << '\n';
    os << "killing = " << format_double(p.killing) << "\n\n";
    write_levy(os, "levy.plus", p.levyPlus);
    write_levy(os, "levy.minus", p.levyMinus);
    write_jump(os, "jump.plus", p.uPlus);
    write_jump(os, "jump.minus", p.uMinus);
    os << "[start]\n";
    os << "startState = \"" << to_string(p.startState) << "\"\n";
    os << "startValue = " << format_double(p.startValue) << '\n';
    return os.str();
}

std::uint64_t model_hash(const MapModel& model)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_model_text(model)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string model_hash_hex(const MapModel& model)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(model_hash(model)));
    return buf;
}

}  // namespace mapfunc
