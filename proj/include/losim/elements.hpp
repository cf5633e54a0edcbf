#pragma once

#include <string>
#include <variant>
#include <vector>

#include "losim/state.hpp"

namespace losim {

// Variable beam splitter between spatial modes a and b, polarization-independent:
//   a_G -> gamma a_G + delta b_G
//   b_G -> -delta a_G + gamma b_G     (orthogonal completion of the unused port)
// gamma is the transmission amplitude, delta the cross amplitude; both real,
// gamma^2 + delta^2 = 1.
struct BeamSplitter {
    std::string a;
    std::string b;
    double gamma = 1.0;
    double delta = 0.0;

    friend bool operator==(const BeamSplitter&, const BeamSplitter&) = default;
};

// Ideal polarizing beam splitter: transmits H across the pair, reflects V in place.
//   a_H <-> b_H,  a_V -> a_V,  b_V -> b_V
struct IdealPbs {
    std::string a;
    std::string b;

    friend bool operator==(const IdealPbs&, const IdealPbs&) = default;
};

// Polarizing beam splitter with a finite extinction ratio r and a mount
// deviation theta. With c = cos(theta) - sqrt(r) sin(theta) and
// s = sin(theta) + sqrt(r) cos(theta), the pair (x, y) transforms as
//   x_H -> (c y_H - s y_V) / sqrt(1+r)
//   y_H -> (c x_H - s x_V) / sqrt(1+r)
//   x_V -> (s x_H + c x_V) / sqrt(1+r)
//   y_V -> (s y_H + c y_V) / sqrt(1+r)
// which is unitary for r in [0,1] and reduces to IdealPbs at (0,0).
struct ImperfectPbs {
    std::string a;
    std::string b;
    double r = 0.0;
    double theta = 0.0;

    friend bool operator==(const ImperfectPbs&, const ImperfectPbs&) = default;
};

// Polarization-entangled photon-pair source emitting into spatial modes a and b:
//   (alpha a_H b_H + beta a_V b_V)|vac>
struct SpdcSource {
    std::string a;
    std::string b;
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};

    friend bool operator==(const SpdcSource&, const SpdcSource&) = default;
};

// Single photon injected into one spatial mode: (alpha a_H + beta a_V)|vac>.
struct PhotonSource {
    std::string spatial;
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};

    friend bool operator==(const PhotonSource&, const PhotonSource&) = default;
};

using Element = std::variant<BeamSplitter, IdealPbs, ImperfectPbs>;
using Source = std::variant<SpdcSource, PhotonSource>;

// Parameter checks; throw Error on violation.
void validate(const BeamSplitter& bs);
void validate(const IdealPbs& pbs);
void validate(const ImperfectPbs& pbs);
void validate(const SpdcSource& src);
void validate(const PhotonSource& src);
void validate(const Element& e);

// The two spatial labels an element touches.
std::vector<std::string> spatialLabels(const Element& e);
std::string elementKind(const Element& e);

// Single-mode substitution table realizing the element.
ModeMap modeMapOf(const Element& e);

PhotonicState applyBs(const PhotonicState& s, const BeamSplitter& bs);
PhotonicState applyIdealPbs(const PhotonicState& s, const IdealPbs& pbs);
PhotonicState applyImperfectPbs(const PhotonicState& s, const ImperfectPbs& pbs);
PhotonicState applyElement(const PhotonicState& s, const Element& e);

// Builds the source's state over the given declared mode set.
PhotonicState prepareSource(const Source& src, std::vector<std::string> declaredModes);

}  // namespace losim
