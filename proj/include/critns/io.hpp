// Field serialization: flat binary fields with a fixed 32-byte header,
// CSV slice export, and dataset directories with key=value manifests.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "critns/grid.hpp"

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts unsupported");

namespace critns {

/// Header layout, 32 bytes total:
///   bytes  0- 3  magic "CNF1"
///   bytes  4- 7  uint32 n (points per axis)
///   bytes  8-15  double half-width L
///   bytes 16-19  uint32 component count (1 scalar, 3 vector)
///   bytes 20-23  uint32 flags (bit 0: values are a nonnegative density)
///   bytes 24-31  reserved, zero
/// followed by count * n^3 little-endian doubles, x-fastest, component-major.
struct FieldHeader {
    std::uint32_t n = 0;
    double half_width = 0.0;
    std::uint32_t components = 0;
    std::uint32_t flags = 0;
};

namespace io_detail {

inline void fail(const std::filesystem::path& p, std::size_t offset,
                 const std::string& what) {
    throw std::runtime_error("field file " + p.string() + ": " + what +
                             " at byte offset " + std::to_string(offset));
}

inline void write_header(std::ostream& os, const FieldHeader& h) {
    char buf[32] = {};
    std::memcpy(buf, "CNF1", 4);
    std::memcpy(buf + 4, &h.n, 4);
    std::memcpy(buf + 8, &h.half_width, 8);
    std::memcpy(buf + 16, &h.components, 4);
    std::memcpy(buf + 20, &h.flags, 4);
    os.write(buf, 32);
}

inline FieldHeader read_header(std::istream& is, const std::filesystem::path& p) {
    char buf[32];
    is.read(buf, 32);
    if (is.gcount() != 32) fail(p, std::size_t(is.gcount()), "truncated header");
    if (std::memcmp(buf, "CNF1", 4) != 0) fail(p, 0, "bad magic");
    FieldHeader h;
    std::memcpy(&h.n, buf + 4, 4);
    std::memcpy(&h.half_width, buf + 8, 8);
    std::memcpy(&h.components, buf + 16, 4);
    std::memcpy(&h.flags, buf + 20, 4);
    if (h.n < 8 || (h.n & (h.n - 1)) != 0) fail(p, 4, "invalid grid size");
    if (!(h.half_width > 0.0)) fail(p, 8, "invalid half-width");
    if (h.components != 1 && h.components != 3) fail(p, 16, "invalid component count");
    return h;
}

inline void read_payload(std::istream& is, const std::filesystem::path& p,
                         std::vector<double>& out) {
    std::size_t bytes = out.size() * sizeof(double);
    is.read(reinterpret_cast<char*>(out.data()), std::streamsize(bytes));
    if (std::size_t(is.gcount()) != bytes)
        fail(p, 32 + std::size_t(is.gcount()), "truncated payload");
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!std::isfinite(out[i]))
            fail(p, 32 + i * sizeof(double), "non-finite value");
}

}  // namespace io_detail

inline void write_field(const std::filesystem::path& p, const ScalarField& f,
                        std::uint32_t flags = 0) {
    f.check();
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + p.string());
    io_detail::write_header(os, {std::uint32_t(f.grid.n), f.grid.half_width, 1, flags});
    os.write(reinterpret_cast<const char*>(f.values.data()),
             std::streamsize(f.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write failed: " + p.string());
}

inline void write_field(const std::filesystem::path& p, const VectorField& u,
                        std::uint32_t flags = 0) {
    u.check();
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + p.string());
    io_detail::write_header(os, {std::uint32_t(u.grid.n), u.grid.half_width, 3, flags});
    for (int c = 0; c < 3; ++c)
        os.write(reinterpret_cast<const char*>(u[c].values.data()),
                 std::streamsize(u[c].values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write failed: " + p.string());
}

inline FieldHeader peek_field(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + p.string());
    return io_detail::read_header(is, p);
}

inline ScalarField read_scalar_field(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + p.string());
    FieldHeader h = io_detail::read_header(is, p);
    if (h.components != 1)
        io_detail::fail(p, 16, "expected scalar field, found vector");
    ScalarField f(Grid3(int(h.n), h.half_width));
    io_detail::read_payload(is, p, f.values);
    return f;
}

inline VectorField read_vector_field(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + p.string());
    FieldHeader h = io_detail::read_header(is, p);
    if (h.components != 3)
        io_detail::fail(p, 16, "expected vector field, found scalar");
    VectorField u(Grid3(int(h.n), h.half_width));
    for (int c = 0; c < 3; ++c) io_detail::read_payload(is, p, u[c].values);
    return u;
}

/// z = const slice as CSV (x, y, value...) for plotting.
inline void write_csv_slice(const std::filesystem::path& p, const ScalarField& f,
                            int k) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open for write: " + p.string());
    os << "x,y,value\n";
    char buf[96];
    for (int j = 0; j < f.grid.n; ++j)
        for (int i = 0; i < f.grid.n; ++i) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", f.grid.coord(i),
                          f.grid.coord(j), f.at(i, j, k));
            os << buf;
        }
}

/// Flat key=value manifest; '#' comments and blank lines ignored,
/// insertion-stable ordering on write via std::map.
using Manifest = std::map<std::string, std::string>;

inline void write_manifest(const std::filesystem::path& p, const Manifest& m) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open for write: " + p.string());
    for (const auto& [k, v] : m) os << k << "=" << v << "\n";
}

inline Manifest read_manifest(const std::filesystem::path& p) {
    std::ifstream is(p);
    if (!is) throw std::runtime_error("cannot open: " + p.string());
    Manifest m;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
            line.pop_back();
        std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq <= b)
            throw std::runtime_error(p.string() + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        std::string key = line.substr(b, eq - b);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::size_t vb = line.find_first_not_of(" \t", eq + 1);
        m[key] = vb == std::string::npos ? "" : line.substr(vb);
    }
    return m;
}

}  // namespace critns

#include "critns/local_energy.hpp"

namespace critns {

/// Dataset directory: manifest.txt plus per-slice velocity (u_XXXX.cnf) and
/// pressure (p_XXXX.cnf) fields.
inline void save_dataset(const std::filesystem::path& dir, const SpaceTimeField& st,
                         Manifest extra = {}) {
    st.check();
    std::filesystem::create_directories(dir);
    char name[32];
    std::string times;
    for (std::size_t i = 0; i < st.times.size(); ++i) {
        std::snprintf(name, sizeof name, "u_%04zu.cnf", i);
        write_field(dir / name, st.u[i]);
        std::snprintf(name, sizeof name, "p_%04zu.cnf", i);
        write_field(dir / name, st.P[i]);
        char t[32];
        // %.17g so the doubles survive the text round trip exactly
        std::snprintf(t, sizeof t, "%.17g", st.times[i]);
        if (i) times += ",";
        times += t;
    }
    extra["n"] = std::to_string(st.grid.n);
    char l[32];
    std::snprintf(l, sizeof l, "%.17g", st.grid.half_width);
    extra["L"] = l;
    extra["slices"] = std::to_string(st.times.size());
    extra["times"] = times;
    extra["is_solution"] = st.is_solution ? "1" : "0";
    write_manifest(dir / "manifest.txt", extra);
}

inline SpaceTimeField load_dataset(const std::filesystem::path& dir) {
    Manifest m = read_manifest(dir / "manifest.txt");
    SpaceTimeField st;
    st.grid = Grid3(std::stoi(m.at("n")), std::stod(m.at("L")));
    st.is_solution = m.count("is_solution") ? m.at("is_solution") == "1" : true;
    std::size_t slices = std::stoul(m.at("slices"));
    std::stringstream ts(m.at("times"));
    std::string tok;
    while (std::getline(ts, tok, ',')) st.times.push_back(std::stod(tok));
    if (st.times.size() != slices)
        throw std::runtime_error(dir.string() + ": manifest slice count mismatch");
    char name[32];
    for (std::size_t i = 0; i < slices; ++i) {
        std::snprintf(name, sizeof name, "u_%04zu.cnf", i);
        st.u.push_back(read_vector_field(dir / name));
        std::snprintf(name, sizeof name, "p_%04zu.cnf", i);
        st.P.push_back(read_scalar_field(dir / name));
    }
    st.check();
    return st;
}

}  // namespace critns
