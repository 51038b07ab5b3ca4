#include "atiqo/pipeline/emit.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace atiqo::pipeline {

namespace fs = std::filesystem;

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string cell(const json& v)
{
    if (v.is_null()) return "";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) return format_number(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return v.dump();
}

std::string single_line(std::string s)
{
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("emit: cannot open " + path.string());
    out << text;
    if (!out) throw Error("emit: write failed for " + path.string());
}

}  // namespace

std::string csv_text(const ResultEnvelope& env)
{
    std::ostringstream out;
    out << "# atiqo " << env.code_version << "\n";
    out << "# spec_hash: " << env.spec_hash << "\n";
    out << "# kind: " << to_string(env.kind) << ", name: " << env.name << "\n";
    out << "# units: atomic units; energies in units of Up where named; entropy in bits\n";
    if (env.partial)
        out << "# status: partial (" << env.failed() << " of " << env.records.size() << " points failed)\n";
    else
        out << "# status: complete (" << env.records.size() << " points)\n";
    for (const auto& r : env.records)
        if (!r.ok) out << "# error: point " << r.index << ": " << single_line(r.error) << "\n";

    for (std::size_t c = 0; c < env.columns.size(); ++c) out << (c ? "," : "") << env.columns[c];
    out << "\n";
    const std::size_t n_sweep = env.records.empty() ? 0 : env.records.front().sweep.size();
    for (const auto& r : env.records) {
        if (!r.ok) continue;
        for (const auto& row : r.rows) {
            for (std::size_t c = 0; c < env.columns.size(); ++c) {
                if (c) out << ",";
                if (c < n_sweep)
                    out << format_number(r.sweep[c]);
                else if (row.contains(env.columns[c]))
                    out << cell(row.at(env.columns[c]));
            }
            out << "\n";
        }
    }
    return out.str();
}

std::string matrix_csv(const json& map)
{
    const auto x = map.at("x").get<std::vector<double>>();
    const auto y = map.at("y").get<std::vector<double>>();
    const auto v = map.at("values").get<std::vector<double>>();
    if (v.size() != x.size() * y.size()) throw InvalidArgument("matrix_csv: values do not match the axes");
    std::string out;
    out.reserve(v.size() * 24);
    for (double xi : x) out += "," + format_number(xi);
    out += "\n";
    for (std::size_t iy = 0; iy < y.size(); ++iy) {
        out += format_number(y[iy]);
        for (std::size_t ix = 0; ix < x.size(); ++ix) out += "," + format_number(v[iy * x.size() + ix]);
        out += "\n";
    }
    return out;
}

std::vector<fs::path> emit(const ResultEnvelope& env, Format format, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("emit: cannot create " + dir.string() + ": " + ec.message());
    std::vector<fs::path> written;
    const fs::path main = dir / (env.name + (format == Format::csv ? ".csv" : ".json"));
    write_file(main, format == Format::csv ? csv_text(env) : to_json(env).dump(2) + "\n");
    written.push_back(main);
    for (const auto& r : env.records) {
        if (!r.ok || r.map.is_null()) continue;
        const fs::path m = dir / (env.name + "_map_" + std::to_string(r.index) + ".csv");
        write_file(m, matrix_csv(r.map));
        written.push_back(m);
    }
    return written;
}

}  // namespace atiqo::pipeline
