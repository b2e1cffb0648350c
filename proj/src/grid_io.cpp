#include "ineqlab/grid_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ineqlab/error.hpp"

namespace ineqlab {
namespace {

static_assert(std::endian::native == std::endian::little, "PGB1 I/O assumes a little-endian host");

constexpr char kMagicBinary[4] = {'P', 'G', 'B', '1'};

std::string format_double(double x) {
    char buf[32];
    int len = std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(len));
}

template <class T>
void put(std::string& out, T x) {
    char b[sizeof(T)];
    std::memcpy(b, &x, sizeof(T));
    out.append(b, sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t off) {
    T x;
    std::memcpy(&x, in.data() + off, sizeof(T));
    return x;
}

}  // namespace

std::string to_pgf1(const GridFunction& u) {
    const GridSpec& s = u.spec();
    std::string out = "PGF1 " + std::to_string(s.d) + " " + std::to_string(s.n) + " " + format_double(s.lambda) + "\n";
    const std::size_t row = static_cast<std::size_t>(s.n);
    for (std::size_t i = 0; i < u.size(); ++i) {
        out += format_double(u[i]);
        out += (i + 1) % row == 0 ? '\n' : ' ';
    }
    return out;
}

GridFunction parse_pgf1(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    GridSpec s;
    if (!(in >> magic) || magic != "PGF1") throw PreconditionError("PGF1 header: bad magic");
    if (!(in >> s.d >> s.n >> s.lambda)) throw PreconditionError("PGF1 header: expected 'PGF1 d n lambda'");
    s.validate();
    std::vector<double> v;
    v.reserve(s.cells());
    std::string tok;
    while (in >> tok) {
        double x = 0.0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (ec != std::errc() || p != tok.data() + tok.size()) throw PreconditionError("PGF1 body: bad value '" + tok + "'");
        v.push_back(x);
    }
    if (v.size() != s.cells())
        throw PreconditionError("PGF1 body: expected " + std::to_string(s.cells()) + " values, found " +
                                std::to_string(v.size()));
    return GridFunction(s, std::move(v));
}

std::string to_pgb1(const GridFunction& u) {
    std::string out(kMagicBinary, 4);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(u.spec().d));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(u.spec().n));
    put<std::uint32_t>(out, 0);
    put<double>(out, u.spec().lambda);
    for (double x : u.values()) put<double>(out, x);
    return out;
}

GridFunction parse_pgb1(const std::string& bytes) {
    if (bytes.size() < 24) throw PreconditionError("PGB1 header: truncated");
    if (std::memcmp(bytes.data(), kMagicBinary, 4) != 0) throw PreconditionError("PGB1 header: bad magic");
    GridSpec s;
    s.d = static_cast<int>(get<std::uint32_t>(bytes, 4));
    s.n = static_cast<int>(get<std::uint32_t>(bytes, 8));
    s.lambda = get<double>(bytes, 16);
    s.validate();
    if (bytes.size() != 24 + 8 * s.cells())
        throw PreconditionError("PGB1 body: expected " + std::to_string(s.cells()) + " values");
    std::vector<double> v(s.cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = get<double>(bytes, 24 + 8 * i);
    return GridFunction(s, std::move(v));
}

void save_grid(const GridFunction& u, const std::string& path, GridFormat fmt) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << (fmt == GridFormat::text ? to_pgf1(u) : to_pgb1(u));
    if (!f) throw std::runtime_error("write failed: " + path);
}

GridFunction load_grid(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    std::string data = ss.str();
    if (data.size() >= 4 && std::memcmp(data.data(), kMagicBinary, 4) == 0) return parse_pgb1(data);
    return parse_pgf1(data);
}

}  // namespace ineqlab
