#pragma once

// JSON and CSV formats. Complex numbers are [re, im] pairs, angles are
// radians in [0, 2 pi), and CSV numbers carry 17 significant digits.

#include <clark/slicefield.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace clark::io {

using nlohmann::json;

inline json to_json(cd z) { return json::array({z.real(), z.imag()}); }

inline cd complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidConfig, "complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline double angle_of(cd z) {
    double t = std::arg(z);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t -= kTwoPi;
    return t;
}

inline json to_json(const DomainDescriptor& d) { return {{"kind", to_string(d.kind())}, {"n", d.dimension()}}; }

inline DomainDescriptor domain_from_json(const json& j) {
    const int n = j.value("n", 1);
    return DomainDescriptor(domain_kind_from_string(j.value("kind", n == 1 ? std::string("disc") : std::string("polydisc"))), n);
}

inline json to_json(const GridSpec& s) {
    json j{{"domain", to_json(s.domain)}, {"quotient_nodes", s.quotient_nodes}, {"slice_nodes", s.slice_nodes}};
    if (s.seed) j["seed"] = *s.seed;
    if (s.domain.kind() == DomainKind::Ball)
        j["ball_rule"] = s.ball_rule == BallQuotientRule::Product ? "product" : "monte_carlo";
    return j;
}

inline GridSpec grid_spec_from_json(const json& j) {
    try {
        GridSpec s;
        s.domain = domain_from_json(j.at("domain"));
        s.quotient_nodes = j.value("quotient_nodes", s.quotient_nodes);
        s.slice_nodes = j.value("slice_nodes", s.slice_nodes);
        if (j.contains("seed") && !j["seed"].is_null()) s.seed = j["seed"].get<std::uint64_t>();
        const std::string rule = j.value("ball_rule", std::string("monte_carlo"));
        if (rule == "product") s.ball_rule = BallQuotientRule::Product;
        else if (rule != "monte_carlo") throw Error(ErrorCode::InvalidConfig, "unknown ball_rule '" + rule + "'");
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("grid spec: ") + e.what());
    }
}

inline json coeffs_to_json(const poly::Coeffs& c) {
    json a = json::array();
    for (const auto& z : c) a.push_back(to_json(z));
    return a;
}

inline poly::Coeffs coeffs_from_json(const json& j) {
    poly::Coeffs c;
    for (const auto& z : j) c.push_back(complex_from_json(z));
    if (c.empty()) throw Error(ErrorCode::InvalidConfig, "empty coefficient list");
    return c;
}

inline json to_json(const RationalSelfMap1D& p) {
    return {{"num", coeffs_to_json(p.numerator())}, {"den", coeffs_to_json(p.denominator())}};
}

/// Validating: rejects denominators vanishing on the closed disc and maps
/// leaving the disc.
inline RationalSelfMap1D rational_from_json(const json& j) {
    return RationalSelfMap1D(coeffs_from_json(j.at("num")), j.contains("den") ? coeffs_from_json(j["den"]) : poly::Coeffs{1.0});
}

inline json to_json(const SymbolMap& s) {
    json terms = json::array();
    for (const auto& t : s.base().terms()) terms.push_back({{"k", t.exponents}, {"c", to_json(t.coeff)}});
    json j{{"base", {{"n", s.dimension()}, {"domain", to_string(s.domain().kind())}, {"terms", terms}}}};
    if (s.post()) j["post"] = to_json(*s.post());
    return j;
}

/// Symbol schema: {"base":{"n":2,"domain":"polydisc","terms":[{"k":[1,1],"c":[1,0]}]},
/// "post":{"num":[...],"den":[...]}}. "domain" defaults to the polydisc.
/// Does not check the self-map bound; see validate_self_map.
inline SymbolMap symbol_from_json(const json& j) {
    try {
        const json& b = j.at("base");
        const int n = b.at("n").get<int>();
        const auto kind = domain_kind_from_string(b.value("domain", n == 1 ? std::string("disc") : std::string("polydisc")));
        std::vector<Monomial> terms;
        for (const auto& t : b.at("terms")) terms.push_back({t.at("k").get<std::vector<int>>(), complex_from_json(t.at("c"))});
        PolyMapND base(DomainDescriptor(kind, n), std::move(terms));
        if (j.contains("post") && !j["post"].is_null()) return SymbolMap(std::move(base), rational_from_json(j["post"]));
        return SymbolMap(std::move(base));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("symbol: ") + e.what());
    }
}

inline json atoms_to_json(const BoundaryMeasure1D& mu) {
    json a = json::array();
    for (const auto& at : mu.atoms()) a.push_back(json::array({angle_of(at.position), at.mass}));
    return a;
}

/// "weights" are the quadrature weights when they differ from the samples.
inline json to_json(const BoundaryMeasure1D& mu) {
    json density{{"grid", mu.grid_size()}, {"values", mu.density()}};
    if (&mu.weights() != &mu.density()) density["weights"] = mu.weights();
    return {{"atoms", atoms_to_json(mu)}, {"density", std::move(density)}, {"total_mass", mu.total_mass()}};
}

inline BoundaryMeasure1D measure_from_json(const json& j) {
    try {
        std::vector<Atom> atoms;
        for (const auto& a : j.at("atoms")) atoms.push_back({std::polar(1.0, a.at(0).get<double>()), a.at(1).get<double>()});
        std::vector<double> density, weights;
        if (j.contains("density")) {
            density = j["density"].at("values").get<std::vector<double>>();
            if (j["density"].contains("grid") && j["density"]["grid"].get<std::size_t>() != density.size())
                throw Error(ErrorCode::InvalidConfig, "density grid size does not match its values");
            if (j["density"].contains("weights")) weights = j["density"]["weights"].get<std::vector<double>>();
        }
        return BoundaryMeasure1D::from_parts(std::move(atoms), std::move(density), std::move(weights));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("measure: ") + e.what());
    }
}

inline std::string fixed17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// "theta,density" rows.
inline std::string density_csv(const BoundaryMeasure1D& mu) {
    std::string out = "theta,density\n";
    for (int j = 0; j < mu.grid_size(); ++j) out += fixed17(mu.theta(j)) + "," + fixed17(mu.density()[j]) + "\n";
    return out;
}

/// "theta,mass" rows.
inline std::string atoms_csv(const BoundaryMeasure1D& mu) {
    std::string out = "theta,mass\n";
    for (const auto& a : mu.atoms()) out += fixed17(angle_of(a.position)) + "," + fixed17(a.mass) + "\n";
    return out;
}

/// Per-node atom lists and density summaries of a field.
inline json field_summary(const SliceField& field) {
    json nodes = json::array();
    double atomic = 0.0, total = 0.0;
    field.for_each_slice([&](std::size_t i, const BoundaryMeasure1D& mu) {
        json rep = json::array();
        for (const auto& c : field.representative(i).coords) rep.push_back(to_json(c));
        nodes.push_back({{"representative", rep},
                         {"weight", field.weight(i)},
                         {"atoms", atoms_to_json(mu)},
                         {"density_mass", mu.density_mass()},
                         {"density_max", mu.max_density()},
                         {"density_grid", mu.grid_size()}});
        atomic += field.weight(i) * mu.atomic_mass();
        total += field.weight(i) * mu.total_mass();
    });
    return {{"symbol", to_json(field.symbol())},
            {"alpha", to_json(field.alpha())},
            {"grid", to_json(field.grid().spec)},
            {"slice_nodes", field.slice_resolution()},
            {"total_mass", total},
            {"singular_mass", atomic},
            {"nodes", std::move(nodes)}};
}

inline std::string profile_csv(const SingularNormProfile& profile) {
    std::string out = "alpha_angle,singular_norm,standard_error\n";
    for (const auto& [a, e] : profile.entries)
        out += fixed17(angle_of(a)) + "," + fixed17(e.value.real()) + "," + fixed17(e.standard_error) + "\n";
    return out;
}

inline json error_object(const Error& e) { return {{"error", std::string(e.name())}, {"message", e.what()}}; }

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "'" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + path + "'");
    out << text;
}

}  // namespace clark::io
