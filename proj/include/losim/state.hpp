#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace losim {

using Complex = std::complex<double>;

// Amplitudes smaller than this are dropped when like terms are merged.
inline constexpr double kMergeEps = 1e-15;
// General numeric tolerance for unitarity / normalization checks.
inline constexpr double kNormTol = 1e-12;
// Sources accept slightly sloppier input amplitudes.
inline constexpr double kSourceNormTol = 1e-9;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse failure in a text format; carries 1-based line/column of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                ": " + what),
          line(line),
          column(column) {}
    int line;
    int column;
};

enum class Pol : std::uint8_t { H = 0, V = 1 };

inline char polChar(Pol p) { return p == Pol::H ? 'H' : 'V'; }

// One optical mode: a spatial path plus a polarization component.
struct Mode {
    std::string spatial;
    Pol pol = Pol::H;

    friend auto operator<=>(const Mode&, const Mode&) = default;
};

// A product of 1 or 2 creation operators applied to vacuum, kept in canonical
// order (spatial label lexicographic, H before V) so that commuting operators
// always produce the same key.
class Monomial {
public:
    explicit Monomial(Mode single) : ops_{std::move(single)} {}

    Monomial(Mode first, Mode second) {
        if (second < first) std::swap(first, second);
        ops_ = {std::move(first), std::move(second)};
    }

    int photons() const { return static_cast<int>(ops_.size()); }
    const std::vector<Mode>& ops() const { return ops_; }

    // Both operators act on the same mode (carries bosonic weight 2).
    bool doublyOccupied() const { return ops_.size() == 2 && ops_[0] == ops_[1]; }

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

private:
    std::vector<Mode> ops_;
};

// Exact complex-amplitude expansion of a 1- or 2-photon state over creation-
// operator monomials. Treated as an immutable value once built; all operations
// on it are pure and return fresh states.
class PhotonicState {
public:
    PhotonicState(int photonNumber, std::vector<std::string> declaredModes);

    int photonNumber() const { return photonNumber_; }
    const std::vector<std::string>& declaredModes() const { return declaredModes_; }
    bool declared(const std::string& spatial) const;

    // Accumulates amplitude onto a monomial (merging like terms). The monomial
    // must have exactly photonNumber() operators over declared spatial labels.
    void add(const Monomial& m, Complex amplitude);

    // Removes terms whose merged amplitude fell below kMergeEps.
    void prune();

    const std::map<Monomial, Complex>& terms() const { return terms_; }
    Complex amplitude(const Monomial& m) const;

    double normSquared() const;

private:
    int photonNumber_;
    std::vector<std::string> declaredModes_;
    std::map<Monomial, Complex> terms_;
};

// <s1|s2> with the bosonic weight: a doubly-occupied monomial contributes
// conj(a1)*a2*2. Conjugate-symmetric. Throws on photon-number mismatch.
Complex innerProduct(const PhotonicState& s1, const PhotonicState& s2);

// Linear single-mode substitution table. Modes absent from the table map to
// themselves.
using ModeImage = std::vector<std::pair<Mode, Complex>>;
using ModeMap = std::map<Mode, ModeImage>;

// Substitutes every creation operator by its image, re-expands products,
// re-canonicalizes and merges like terms. Output spatial labels must be
// declared in the state.
PhotonicState applyModeMap(const PhotonicState& s, const ModeMap& map);

// Returns true when the table, completed with identity rows over `modes`
// x {H,V}, forms a unitary matrix to within tol.
bool modeMapIsUnitary(const ModeMap& map, const std::vector<std::string>& modes,
                      double tol = kNormTol);

// Text format, one state per stream:
//   photons <1|2>
//   modes <label> <label> ...
//   amp <re> <im> <spatial>:<H|V> [<spatial>:<H|V>]
PhotonicState readState(std::istream& in);
PhotonicState readStateFile(const std::string& path);
void writeState(const PhotonicState& s, std::ostream& out);
std::string writeStateString(const PhotonicState& s);

// 17-significant-digit decimal form; round-trips a double exactly.
std::string formatDouble(double v);

}  // namespace losim
