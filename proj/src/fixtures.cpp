#include "ineqlab/fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ineqlab/chains.hpp"
#include "ineqlab/error.hpp"
#include "ineqlab/families.hpp"
#include "ineqlab/level_geometry.hpp"

namespace ineqlab {

namespace {

double lookup(const std::map<std::string, double>& m, const std::string& key, const char* what) {
    auto it = m.find(key);
    require(it != m.end(), std::string("missing fixture ") + what + ": " + key);
    return it->second;
}

std::string params_string(const FamilySpec& f) {
    std::ostringstream os;
    os << "d=" << f.grid.d << " n=" << f.grid.n;
    for (const auto& [k, v] : f.params) os << " " << k << "=" << v;
    return os.str();
}

Instance from_spec(IneqId id, const FamilySpec& f) {
    Instance in;
    in.family = family_name(f.id);
    in.seed = f.seed;
    in.input = params_string(f);
    in.u = prepare_input(id, generate(f));
    return in;
}

FamilySpec spec(Family id, int d, int n, std::uint64_t seed, std::map<std::string, double> params = {}) {
    FamilySpec f;
    f.id = id;
    f.grid = {d, n, 1.0};
    f.seed = seed;
    f.params = std::move(params);
    return f;
}

std::vector<Instance> prop1_set(IneqId id) {
    std::vector<Instance> out;
    for (std::uint64_t s = 0; s < 60; ++s) out.push_back(from_spec(id, spec(Family::random_steps, 1, 128, s)));
    for (std::uint64_t s = 0; s < 50; ++s) out.push_back(from_spec(id, spec(Family::random_steps, 2, 32, s)));
    for (std::uint64_t s = 0; s < 10; ++s) out.push_back(from_spec(id, spec(Family::random_steps, 2, 64, s)));
    for (std::uint64_t s = 0; s < 30; ++s) out.push_back(from_spec(id, spec(Family::random_fourier, 1, 128, s)));
    for (std::uint64_t s = 0; s < 30; ++s) out.push_back(from_spec(id, spec(Family::random_fourier, 2, 32, s)));
    for (int w = 8; w <= 120; w += 8) out.push_back(from_spec(id, spec(Family::stripe, 1, 128, 0, {{"width", w}})));
    for (int w = 4; w <= 60; w += 4) out.push_back(from_spec(id, spec(Family::stripe, 2, 64, 0, {{"width", w}})));
    for (double phi : {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32})
        for (std::uint64_t s = 0; s < 2; ++s)
            out.push_back(from_spec(id, spec(Family::ostwald, 2, 64, s, {{"phi", phi}, {"jitter", 0.25}})));
    return out;
}

std::vector<Instance> prop2_set(IneqId id) {
    std::vector<Instance> out;
    for (std::uint64_t s = 0; s < 30; ++s) out.push_back(from_spec(id, spec(Family::random_steps, 2, 32, s)));
    for (std::uint64_t s = 0; s < 20; ++s) out.push_back(from_spec(id, spec(Family::random_fourier, 2, 32, s)));
    for (int k = 2; k <= 7; ++k)
        for (std::uint64_t s = 0; s < 2; ++s)
            out.push_back(
                from_spec(id, spec(Family::ostwald, 2, 64, s, {{"phi", std::ldexp(1.0, -k)}, {"jitter", 0.25}})));
    for (int k = 4; k <= 9; ++k)
        out.push_back(from_spec(id, spec(Family::ostwald, 2, 256, 0, {{"phi", std::ldexp(1.0, -k)}})));
    return out;
}

std::vector<Instance> geomest_set() {
    std::vector<Instance> out;
    auto binary = [&](FamilySpec f) { out.push_back(from_spec(IneqId::geomest, f)); };
    for (double phi : {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64})
        for (int per_axis : {1, 2})
            binary(spec(Family::ball_lattice, 2, 64, 0, {{"phi", phi}, {"per_axis", per_axis}, {"jitter", 0.25}}));
    for (int k = 4; k <= 9; ++k) binary(spec(Family::ostwald, 2, 256, 0, {{"phi", std::ldexp(1.0, -k)}}));
    for (int w = 8; w <= 56; w += 8) binary(spec(Family::stripe, 1, 128, 0, {{"width", w}}));
    for (int w = 4; w <= 28; w += 4) binary(spec(Family::stripe, 2, 64, 0, {{"width", w}}));
    for (double phi : {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32})
        binary(spec(Family::ball_lattice, 1, 128, 0, {{"phi", phi}, {"per_axis", 2}, {"jitter", 0.25}}));
    return out;
}

std::vector<Instance> prop3_set() {
    std::vector<Instance> out;
    const IneqId id = IneqId::prop3;
    for (std::uint64_t s = 0; s < 20; ++s)
        out.push_back(from_spec(id, spec(Family::random_steps, 1, 64, s, {{"levels", 4}})));
    for (std::uint64_t s = 0; s < 15; ++s)
        out.push_back(from_spec(id, spec(Family::random_steps, 2, 16, s, {{"levels", 4}})));
    for (double phi : {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32})
        out.push_back(from_spec(id, spec(Family::ball_lattice, 2, 32, 0, {{"phi", phi}, {"jitter", 0.25}})));
    for (double r : {0.1, 0.2, 0.3}) {
        out.push_back(from_spec(id, spec(Family::single_bump, 1, 64, 0, {{"radius", r}})));
        out.push_back(from_spec(id, spec(Family::single_bump, 2, 32, 0, {{"radius", r}})));
    }
    return out;
}

std::vector<Instance> prop5_set() {
    std::vector<Instance> out;
    const double nus[] = {0.05, 0.1, 0.2, 0.5, 1.0};
    const double fracs[] = {1.0 / 64, 1.0 / 128, 1.0 / 256};
    const GridSpec g{2, 32, 1.0};
    for (int i = 0; i < 50; ++i) {
        const int j = i / 5;
        const double nu = nus[i % 5];
        const double phi = std::pow(nu, prop5_threshold_exponent(2)) / (2.0 * kProp5Budget);
        const double f = fracs[j % 3];
        const int per_axis = 1 + (j / 3) % 2;
        GridFunction chi = ball_lattice_indicator(g, f, per_axis, 0.25, static_cast<std::uint64_t>(i));
        GridFunction u = chi * (phi / chi.mean());
        GridFunction v;
        std::string vkind;
        switch ((i + j) % 3) {
            case 0:
                v = GridFunction::constant(g, u.mean());
                vkind = "uniform";
                break;
            case 1:
                v = shift(u, {g.n / 4, g.n / 8, 0});
                vkind = "shifted";
                break;
            default: {
                GridFunction w = ball_lattice_indicator(g, 1.0 / 16, 1, 0.25, 1000 + static_cast<std::uint64_t>(i));
                v = w * (u.mean() / w.mean());
                vkind = "ball-lattice-1/16";
            }
        }
        std::ostringstream os;
        os << "nu=" << nu << " phi=" << phi << " frac=" << f << " per_axis=" << per_axis << " v=" << vkind;
        Instance in;
        in.family = "prop5-sweep";
        in.seed = static_cast<std::uint64_t>(i);
        in.input = os.str();
        in.u = u;
        in.v = v;
        in.nu = nu;
        out.push_back(in);
    }
    return out;
}

}  // namespace

double Fixtures::constant(const std::string& key) const { return lookup(constants, key, "constant"); }

double Fixtures::band(const std::string& key) const { return lookup(bands, key, "band"); }

double Fixtures::constant_for(IneqId id, double q) const {
    const std::string key = id == IneqId::gn ? gn_key(q) : ineq_name(id);
    auto it = constants.find(key);
    return it == constants.end() ? std::numeric_limits<double>::infinity() : it->second;
}

std::string gn_key(double q) {
    if (std::isinf(q)) return "gn_qinf";
    std::ostringstream os;
    os << "gn_q" << q;
    return os.str();
}

std::string default_fixtures_path() {
    if (const char* env = std::getenv("INEQLAB_FIXTURES")) return env;
    return INEQLAB_FIXTURES_PATH;
}

Fixtures load_fixtures(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open fixtures file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError("malformed fixtures file " + path + ": " + e.what());
    }
    Fixtures f;
    for (const char* section : {"constants", "bands", "kernel"}) {
        if (!j.contains(section)) continue;
        auto& dst = std::string(section) == "constants" ? f.constants
                    : std::string(section) == "bands"   ? f.bands
                                                        : f.kernel;
        for (auto it = j[section].begin(); it != j[section].end(); ++it) dst[it.key()] = it.value().get<double>();
    }
    return f;
}

void save_fixtures(const Fixtures& f, const std::string& path) {
    nlohmann::ordered_json j;
    j["constants"] = f.constants;
    j["bands"] = f.bands;
    j["kernel"] = f.kernel;
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot write fixtures file " + path);
    out << j.dump(2) << "\n";
}

std::vector<Instance> frozen_instances(IneqId id) {
    switch (id) {
        case IneqId::prop1:
        case IneqId::gn:
        case IneqId::weak1: return prop1_set(id);
        case IneqId::prop2:
        case IneqId::weaklog: return prop2_set(id);
        case IneqId::geomest: return geomest_set();
        case IneqId::prop3: return prop3_set();
        case IneqId::prop5: return prop5_set();
        case IneqId::prop4: break;
    }
    throw PreconditionError("no frozen set for " + ineq_name(id) + " (informational only)");
}

Fixtures recalibrate(const Fixtures& current) {
    Fixtures f;
    f.bands = current.bands;
    for (IneqId id : {IneqId::prop1, IneqId::weak1, IneqId::prop2, IneqId::weaklog, IneqId::geomest, IneqId::prop3,
                      IneqId::prop5})
        f.constants[ineq_name(id)] = calibrate(id, frozen_instances(id)).constant;
    const auto gn_set = frozen_instances(IneqId::gn);
    for (double q : kGnExponents) {
        CheckParams p;
        p.q = q;
        f.constants[gn_key(q)] = calibrate(IneqId::gn, gn_set, p).constant;
    }
    // Prop 1 squared, restated for +-1 fields.
    f.constants["coarsening"] = 1.0 / (f.constants["prop1"] * f.constants["prop1"]);
    f.constants["branching_step"] = calibrate_branching_step();
    f.constants["regime2"] = calibrate_regime2();
    for (int d : {1, 2}) {
        const auto b = bump_reference_constants(d);
        f.kernel["grad_l1_d" + std::to_string(d)] = b.grad_l1;
        f.kernel["lap_l1_d" + std::to_string(d)] = b.lap_l1;
    }
    return f;
}

}  // namespace ineqlab
