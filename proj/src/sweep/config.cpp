#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "coopnet/sweep.hpp"

namespace coopnet {

ConfigError::ConfigError(const std::string& source, int line, std::string key, const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                         (key.empty() ? std::string() : " [" + key + "]") + ": " + what),
      line_(line),
      key_(std::move(key))
{
}

void SweepSpec::validate() const
{
    auto fail = [](const char* key, const std::string& what) { throw InvariantError(key, what); };
    if (schemes.empty()) fail("sweep.schemes", "must not be empty");
    if (b_values.empty()) fail("sweep.b_values", "must not be empty");
    if (d_sd_values.empty()) fail("sweep.d_sd_values", "must not be empty");
    if (relay_frac_values.empty()) fail("sweep.relay_frac_values", "must not be empty");
    for (int b : b_values) {
        try {
            Modulation{b};
        } catch (const InvariantError& e) {
            fail("sweep.b_values", e.what());
        }
    }
    for (double d : d_sd_values) {
        try {
            Geometry{d, 0.5}.validate();
        } catch (const InvariantError& e) {
            fail("sweep.d_sd_values", e.what());
        }
    }
    for (double t : relay_frac_values) {
        try {
            Geometry{1.0, t}.validate();
        } catch (const InvariantError& e) {
            fail("sweep.relay_frac_values", e.what());
        }
    }
    try {
        params.validate();
    } catch (const InvariantError& e) {
        throw InvariantError("params." + e.key(), e.what());
    }
    if (mc) mc->validate();
}

std::size_t SweepSpec::cardinality() const
{
    return schemes.size() * b_values.size() * d_sd_values.size() * relay_frac_values.size();
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class LineParser {
public:
    LineParser(std::string source, int line, std::string key)
        : source_(std::move(source)), line_(line), key_(std::move(key))
    {
    }

    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(source_, line_, key_, what); }

    template <typename T>
    T number(std::string_view text) const
    {
        text = trim(text);
        T value{};
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
            fail("cannot parse '" + std::string(text) + "' as a number");
        }
        return value;
    }

    std::vector<std::string_view> items(std::string_view text) const
    {
        text = trim(text);
        if (!text.empty() && text.front() == '[') {
            if (text.back() != ']') fail("unterminated list");
            text = trim(text.substr(1, text.size() - 2));
        }
        std::vector<std::string_view> out;
        if (text.empty()) fail("empty list");
        while (true) {
            const auto comma = text.find(',');
            const auto item = trim(text.substr(0, comma));
            if (item.empty()) fail("empty list element");
            out.push_back(item);
            if (comma == std::string_view::npos) break;
            text = text.substr(comma + 1);
        }
        return out;
    }

    template <typename T>
    std::vector<T> list(std::string_view text) const
    {
        std::vector<T> out;
        for (auto item : items(text)) out.push_back(number<T>(item));
        return out;
    }

private:
    std::string source_;
    int line_;
    std::string key_;
};

using Setter = std::function<void(SweepSpec&, const LineParser&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters()
{
    auto param = [](double NetworkParams::*field) -> Setter {
        return [field](SweepSpec& spec, const LineParser& p, std::string_view v) {
            spec.params.*field = p.number<double>(v);
        };
    };
    auto mc_field = [](std::uint64_t McConfig::*field) -> Setter {
        return [field](SweepSpec& spec, const LineParser& p, std::string_view v) {
            if (!spec.mc) spec.mc.emplace();
            (*spec.mc).*field = p.number<std::uint64_t>(v);
        };
    };
    static const std::map<std::string, Setter, std::less<>> table = {
        {"params.p_t", param(&NetworkParams::p_t)},
        {"params.n_0", param(&NetworkParams::n_0)},
        {"params.beta", param(&NetworkParams::beta)},
        {"params.l_bits", param(&NetworkParams::l_bits)},
        {"params.bandwidth", param(&NetworkParams::bandwidth)},
        {"params.p_tr", param(&NetworkParams::p_tr)},
        {"params.t_tr", param(&NetworkParams::t_tr)},
        {"params.p_ct", param(&NetworkParams::p_ct)},
        {"params.p_cr", param(&NetworkParams::p_cr)},
        {"params.eta", param(&NetworkParams::eta)},
        {"params.target_ber", param(&NetworkParams::target_ber)},
        {"sweep.schemes",
         [](SweepSpec& spec, const LineParser& p, std::string_view v) {
             spec.schemes.clear();
             for (auto item : p.items(v)) {
                 const auto kind = parse_scheme(item);
                 if (!kind) p.fail("unknown scheme '" + std::string(item) + "'");
                 spec.schemes.push_back(*kind);
             }
         }},
        {"sweep.b_values",
         [](SweepSpec& spec, const LineParser& p, std::string_view v) { spec.b_values = p.list<int>(v); }},
        {"sweep.d_sd_values",
         [](SweepSpec& spec, const LineParser& p, std::string_view v) { spec.d_sd_values = p.list<double>(v); }},
        {"sweep.relay_frac_values",
         [](SweepSpec& spec, const LineParser& p, std::string_view v) {
             spec.relay_frac_values = p.list<double>(v);
         }},
        {"mc.trials", mc_field(&McConfig::trials)},
        {"mc.seed", mc_field(&McConfig::seed)},
        {"mc.batch_size", mc_field(&McConfig::batch_size)},
        {"mc.threads",
         [](SweepSpec& spec, const LineParser& p, std::string_view v) {
             if (!spec.mc) spec.mc.emplace();
             spec.mc->threads = p.number<unsigned>(v);
         }},
    };
    return table;
}

}  // namespace

SweepSpec parse_config_text(std::string_view text, std::string_view source)
{
    SweepSpec spec;
    std::set<std::string, std::less<>> seen;
    const std::string source_name(source);
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(source_name, line_no, {}, "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(source_name, line_no, key, "unknown key");
        if (!seen.insert(key).second) throw ConfigError(source_name, line_no, key, "duplicate key");
        if (value.empty()) throw ConfigError(source_name, line_no, key, "missing value");
        it->second(spec, LineParser(source_name, line_no, key), value);
    }
    spec.validate();
    return spec;
}

SweepSpec parse_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), 0, {}, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

}  // namespace coopnet
