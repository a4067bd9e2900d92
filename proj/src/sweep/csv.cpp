#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "coopnet/sweep.hpp"

namespace coopnet {

namespace {

constexpr std::string_view kBaseHeader = "scheme,b,d_sd,relay_frac,gamma_th,p_success,p_avg_w,e_bit_j,gain";
constexpr std::string_view kMcHeader = ",mc_p_success,mc_se,mc_e_bit,mc_e_bit_se";

void append_real(std::string& out, double v)
{
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    out.append(buf.data(), res.ptr);
}

double parse_real(std::string_view s, const std::string& context)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error(context + ": bad number '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        out.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) return out;
        line = line.substr(comma + 1);
    }
}

}  // namespace

std::string format_csv(std::span<const OutputRow> rows, bool with_mc)
{
    std::string out(kBaseHeader);
    if (with_mc) out += kMcHeader;
    out += ",error\n";
    for (const OutputRow& r : rows) {
        out += scheme_name(r.scheme);
        out += ',';
        out += std::to_string(r.b);
        for (double v : {r.d_sd, r.relay_frac, r.gamma_th, r.p_success, r.p_avg_w, r.e_bit_j, r.gain}) {
            out += ',';
            append_real(out, v);
        }
        if (with_mc) {
            const McColumns mc = r.mc.value_or(McColumns{});
            for (double v : {mc.p_success, mc.p_success_se, mc.e_bit, mc.e_bit_se}) {
                out += ',';
                append_real(out, v);
            }
        }
        out += ',';
        out += r.error;
        out += '\n';
    }
    return out;
}

void write_csv(std::span<const OutputRow> rows, const std::filesystem::path& path, bool with_mc)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::system_error(errno, std::generic_category(), "write_csv: cannot open " + path.string());
    }
    const std::string text = format_csv(rows, with_mc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
        throw std::system_error(errno, std::generic_category(), "write_csv: write failed for " + path.string());
    }
}

std::vector<OutputRow> read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: " + path.string() + " is empty");

    const bool with_mc = line.find("mc_p_success") != std::string::npos;
    const std::size_t columns = 9 + (with_mc ? 4 : 0) + 1;
    std::vector<OutputRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string context = path.string() + ":" + std::to_string(line_no);
        const auto cells = split(line);
        if (cells.size() != columns) throw std::runtime_error(context + ": wrong column count");
        OutputRow r;
        const auto kind = parse_scheme(cells[0]);
        if (!kind) throw std::runtime_error(context + ": unknown scheme");
        r.scheme = *kind;
        r.b = static_cast<int>(parse_real(cells[1], context));
        double* fields[] = {&r.d_sd, &r.relay_frac, &r.gamma_th, &r.p_success, &r.p_avg_w, &r.e_bit_j, &r.gain};
        for (std::size_t i = 0; i < 7; ++i) *fields[i] = parse_real(cells[2 + i], context);
        if (with_mc) {
            McColumns mc;
            mc.p_success = parse_real(cells[9], context);
            mc.p_success_se = parse_real(cells[10], context);
            mc.e_bit = parse_real(cells[11], context);
            mc.e_bit_se = parse_real(cells[12], context);
            r.mc = mc;
        }
        r.error = std::string(cells.back());
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace coopnet
