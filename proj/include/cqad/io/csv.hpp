#pragma once

// Plain CSV with a one-line header. Numbers are written with 12 significant
// digits; NaN and infinities round-trip as "nan" / "inf".

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cqad/error.hpp"
#include "cqad/reflection.hpp"

namespace cqad::io {

class IoError : public Error {
public:
    using Error::Error;
};

inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// Writes to a sibling temporary file and renames it over the target, so a
/// reader never sees a half-written file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string header_line() const {
        std::string s;
        for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
        return s;
    }

    std::string to_string() const {
        std::string out = header_line() + "\n";
        for (const auto& r : rows) {
            if (r.size() != header.size()) throw ShapeError("csv row width does not match header");
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ',';
                out += format_number(r[i]);
            }
            out += '\n';
        }
        return out;
    }
};

namespace detail {

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline std::string trim_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

} // namespace detail

inline CsvTable parse_csv(const std::string& text, const std::string& source = "csv") {
    std::istringstream in(text);
    std::string line;
    CsvTable t;
    if (!std::getline(in, line)) throw IoError(source + ": empty file");
    t.header = detail::split(detail::trim_cr(line));
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim_cr(line);
        if (line.empty()) continue;
        const auto cells = detail::split(line);
        if (cells.size() != t.header.size())
            throw IoError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                          " columns, found " + std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || *end != '\0')
                throw IoError(source + ":" + std::to_string(lineno) + ": '" + c + "' is not a number");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path), path.string()); }

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) { write_atomic(path, t.to_string()); }

inline const char* kSpectrumHeader = "frequency,re_s11,im_s11,abs_s11";
inline const char* kFluxHeader = "current,frequency,abs_s11";

enum class CsvKind { spectrum, flux_map, other };

inline CsvKind detect_kind(const CsvTable& t) {
    const std::string h = t.header_line();
    if (h == kSpectrumHeader) return CsvKind::spectrum;
    if (h == kFluxHeader) return CsvKind::flux_map;
    return CsvKind::other;
}

inline CsvTable spectrum_table(const ReflectionSpectrum& s) {
    if (s.frequencies.size() != s.s11.size()) throw ShapeError("spectrum: frequency and s11 lengths differ");
    CsvTable t{detail::split(kSpectrumHeader), {}};
    t.rows.reserve(s.s11.size());
    for (std::size_t i = 0; i < s.s11.size(); ++i)
        t.rows.push_back({s.frequencies[i], s.s11[i].real(), s.s11[i].imag(), std::abs(s.s11[i])});
    return t;
}

inline ReflectionSpectrum spectrum_from_table(const CsvTable& t) {
    if (detect_kind(t) != CsvKind::spectrum)
        throw IoError("expected spectrum header '" + std::string(kSpectrumHeader) + "', found '" + t.header_line() + "'");
    ReflectionSpectrum s;
    for (const auto& r : t.rows) {
        s.frequencies.push_back(r[0]);
        s.s11.emplace_back(r[1], r[2]);
    }
    return s;
}

/// Long format, one line per (current, frequency), currents outermost.
inline CsvTable flux_table(const FluxSweepMap& m) {
    const std::size_t nf = m.frequencies.size();
    if (m.magnitude.size() != m.currents.size() * nf) throw ShapeError("flux map: magnitude size mismatch");
    CsvTable t{detail::split(kFluxHeader), {}};
    t.rows.reserve(m.magnitude.size());
    for (std::size_t i = 0; i < m.currents.size(); ++i)
        for (std::size_t j = 0; j < nf; ++j) t.rows.push_back({m.currents[i], m.frequencies[j], m.magnitude[i * nf + j]});
    return t;
}

inline FluxSweepMap flux_from_table(const CsvTable& t) {
    if (detect_kind(t) != CsvKind::flux_map)
        throw IoError("expected flux map header '" + std::string(kFluxHeader) + "', found '" + t.header_line() + "'");
    FluxSweepMap m;
    for (const auto& r : t.rows) {
        if (m.currents.empty() || r[0] != m.currents.back()) m.currents.push_back(r[0]);
        if (m.currents.size() == 1) m.frequencies.push_back(r[1]);
        m.magnitude.push_back(r[2]);
    }
    const std::size_t nf = m.frequencies.size();
    if (m.currents.empty() || m.magnitude.size() != m.currents.size() * nf)
        throw IoError("flux map is not a rectangular current x frequency grid");
    for (std::size_t k = 0; k < t.rows.size(); ++k)
        if (t.rows[k][1] != m.frequencies[k % nf] || t.rows[k][0] != m.currents[k / nf])
            throw IoError("flux map row " + std::to_string(k + 2) + " breaks the grid ordering");
    return m;
}

inline ReflectionSpectrum read_spectrum(const std::filesystem::path& p) { return spectrum_from_table(read_csv(p)); }
inline FluxSweepMap read_flux_map(const std::filesystem::path& p) { return flux_from_table(read_csv(p)); }

} // namespace cqad::io
