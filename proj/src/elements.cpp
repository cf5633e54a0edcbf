#include "losim/elements.hpp"

#include <cmath>
#include <utility>

namespace losim {

namespace {

void requireDistinct(const std::string& a, const std::string& b, const char* kind) {
    if (a == b)
        throw Error(std::string(kind) + " needs two distinct spatial modes, got '" + a +
                    "' twice");
}

ModeMap mapOf(const BeamSplitter& bs) {
    ModeMap m;
    for (Pol g : {Pol::H, Pol::V}) {
        m[{bs.a, g}] = {{{bs.a, g}, bs.gamma}, {{bs.b, g}, bs.delta}};
        m[{bs.b, g}] = {{{bs.a, g}, -bs.delta}, {{bs.b, g}, bs.gamma}};
    }
    return m;
}

ModeMap mapOf(const IdealPbs& pbs) {
    ModeMap m;
    m[{pbs.a, Pol::H}] = {{{pbs.b, Pol::H}, 1.0}};
    m[{pbs.b, Pol::H}] = {{{pbs.a, Pol::H}, 1.0}};
    return m;
}

ModeMap mapOf(const ImperfectPbs& pbs) {
    const double c = std::cos(pbs.theta) - std::sqrt(pbs.r) * std::sin(pbs.theta);
    const double s = std::sin(pbs.theta) + std::sqrt(pbs.r) * std::cos(pbs.theta);
    const double p = 1.0 / std::sqrt(1.0 + pbs.r);
    const std::string& x = pbs.a;
    const std::string& y = pbs.b;
    ModeMap m;
    m[{x, Pol::H}] = {{{y, Pol::H}, p * c}, {{y, Pol::V}, -p * s}};
    m[{y, Pol::H}] = {{{x, Pol::H}, p * c}, {{x, Pol::V}, -p * s}};
    m[{x, Pol::V}] = {{{x, Pol::H}, p * s}, {{x, Pol::V}, p * c}};
    m[{y, Pol::V}] = {{{y, Pol::H}, p * s}, {{y, Pol::V}, p * c}};
    return m;
}

}  // namespace

void validate(const BeamSplitter& bs) {
    requireDistinct(bs.a, bs.b, "bs");
    const double n = bs.gamma * bs.gamma + bs.delta * bs.delta;
    if (std::abs(n - 1.0) > kNormTol)
        throw Error("bs amplitudes not normalized: gamma^2+delta^2 = " + formatDouble(n));
}

void validate(const IdealPbs& pbs) { requireDistinct(pbs.a, pbs.b, "pbs"); }

void validate(const ImperfectPbs& pbs) {
    requireDistinct(pbs.a, pbs.b, "ipbs");
    if (!(pbs.r >= 0.0 && pbs.r <= 1.0))
        throw Error("ipbs extinction ratio outside [0,1]: " + formatDouble(pbs.r));
}

void validate(const SpdcSource& src) {
    requireDistinct(src.a, src.b, "spdc");
    const double n = std::norm(src.alpha) + std::norm(src.beta);
    if (std::abs(n - 1.0) > kSourceNormTol)
        throw Error("spdc amplitudes not normalized: |alpha|^2+|beta|^2 = " +
                    formatDouble(n));
}

void validate(const PhotonSource& src) {
    const double n = std::norm(src.alpha) + std::norm(src.beta);
    if (std::abs(n - 1.0) > kSourceNormTol)
        throw Error("photon amplitudes not normalized: |alpha|^2+|beta|^2 = " +
                    formatDouble(n));
}

void validate(const Element& e) {
    std::visit([](const auto& x) { validate(x); }, e);
}

std::vector<std::string> spatialLabels(const Element& e) {
    return std::visit(
        [](const auto& x) {
            return std::vector<std::string>{x.a, x.b};
        },
        e);
}

std::string elementKind(const Element& e) {
    struct Kind {
        std::string operator()(const BeamSplitter&) const { return "bs"; }
        std::string operator()(const IdealPbs&) const { return "pbs"; }
        std::string operator()(const ImperfectPbs&) const { return "ipbs"; }
    };
    return std::visit(Kind{}, e);
}

ModeMap modeMapOf(const Element& e) {
    return std::visit([](const auto& x) { return mapOf(x); }, e);
}

PhotonicState applyBs(const PhotonicState& s, const BeamSplitter& bs) {
    validate(bs);
    return applyModeMap(s, mapOf(bs));
}

PhotonicState applyIdealPbs(const PhotonicState& s, const IdealPbs& pbs) {
    validate(pbs);
    return applyModeMap(s, mapOf(pbs));
}

PhotonicState applyImperfectPbs(const PhotonicState& s, const ImperfectPbs& pbs) {
    validate(pbs);
    return applyModeMap(s, mapOf(pbs));
}

PhotonicState applyElement(const PhotonicState& s, const Element& e) {
    validate(e);
    return applyModeMap(s, modeMapOf(e));
}

PhotonicState prepareSource(const Source& src, std::vector<std::string> declaredModes) {
    if (const auto* spdc = std::get_if<SpdcSource>(&src)) {
        validate(*spdc);
        PhotonicState s(2, std::move(declaredModes));
        s.add(Monomial({spdc->a, Pol::H}, {spdc->b, Pol::H}), spdc->alpha);
        s.add(Monomial({spdc->a, Pol::V}, {spdc->b, Pol::V}), spdc->beta);
        s.prune();
        return s;
    }
    const auto& ph = std::get<PhotonSource>(src);
    validate(ph);
    PhotonicState s(1, std::move(declaredModes));
    s.add(Monomial({ph.spatial, Pol::H}), ph.alpha);
    s.add(Monomial({ph.spatial, Pol::V}), ph.beta);
    s.prune();
    return s;
}

}  // namespace losim
