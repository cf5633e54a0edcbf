#pragma once

#include <string>
#include <vector>

#include "losim/netlist.hpp"
#include "losim/state.hpp"

namespace losim {

enum class GateKind { Cnot, Cswap };

// Dense complex matrix in the logical computational basis, row-major,
// basis ordered control-major then target digits lexicographic.
class GateMatrix {
public:
    explicit GateMatrix(int dimension);

    int dimension() const { return dim_; }
    Complex& at(int row, int col) { return entries_[row * dim_ + col]; }
    const Complex& at(int row, int col) const { return entries_[row * dim_ + col]; }

    bool isUnitary(double tol = kNormTol) const;
    // Exact 0/1 entries with a single 1 per row and per column.
    bool isPermutation() const;
    double maxAbsDiff(const GateMatrix& other) const;

private:
    int dim_;
    std::vector<Complex> entries_;
};

// Maps logical basis labels to physical creation-operator monomials.
// Control: V-polarized photons encode 0, H-polarized encode 1 (both photons
// share the polarization in the two-photon case). Targets: spatial label
// lists in digit order, one list per photon.
struct LogicalEncoding {
    GateKind kind = GateKind::Cnot;
    std::vector<std::string> targetA;
    std::vector<std::string> targetB;  // empty for Cnot

    int targetDim() const { return static_cast<int>(targetA.size()); }
    // 2 * d for Cnot (d = 2), 2 * d^2 for Cswap.
    int dimension() const;

    struct Label {
        int control = 0;
        int i = 0;
        int j = 0;  // unused for Cnot
    };

    int indexOf(const Label& label) const;
    Label labelAt(int index) const;
    std::string labelText(int index) const;  // "|cij>" rendering
    Monomial monomialAt(int index) const;
    std::vector<std::string> allModes() const;

    // Basis state: that monomial with amplitude 1 over allModes().
    PhotonicState encode(int index) const;
};

// Projection of a physical state onto the encoded basis. leakage is the
// squared norm of what falls outside it.
struct Decomposition {
    std::vector<Complex> amplitudes;
    double leakage = 0.0;
};

Decomposition decode(const LogicalEncoding& enc, const PhotonicState& s);

// Amplitude pair of one fan-out splitter, |x|^2 + |y|^2 = 1 (real).
struct BsParam {
    double x = 1.0;
    double y = 0.0;

    friend bool operator==(const BsParam&, const BsParam&) = default;
};

// One splitter of the fan-out: amplitude on `from` spreads to `to`. When
// xOnFrom, x multiplies the part staying on `from` and y the part crossing;
// otherwise the roles are swapped (the source-entry side of photon B).
struct FanoutStep {
    int from = 0;
    int to = 0;
    bool xOnFrom = true;
};

// Splitter wirings for one photon side, d-1 steps each. Photon A enters
// digit 0 and fans upward; photon B enters digit d-1 and fans downward.
// d = 2^n + q: n doubling levels, then q extra splitters; d = 3 uses a
// dedicated arrangement that keeps every digit amplitude a short product of
// splitter parameters.
std::vector<FanoutStep> fanoutStepsA(int d);
std::vector<FanoutStep> fanoutStepsB(int d);

// Splitter parameters for both sides of the d-mode fan-out.
struct FanoutSpec {
    int d = 2;
    int n = 1;  // d = 2^n + q, 0 <= q < 2^n
    int q = 0;
    std::vector<BsParam> paramsA;  // length d-1
    std::vector<BsParam> paramsB;

    // All d amplitudes on each side come out 1/sqrt(d).
    static FanoutSpec uniform(int d);
};

void validate(const FanoutSpec& spec);

// A gate circuit splits into the state-prep network (source plus fan-out)
// and the gate proper; element counts and depth are quoted for the gate only.
struct GateCircuit {
    Netlist prep;
    Netlist gate;
    LogicalEncoding encoding;
};

// Single photon in modes a, b: prep is the source plus one splitter, the gate
// is one polarizing beam splitter.
GateCircuit buildCnot(double gamma, double delta, Complex alpha, Complex beta);

// Photon pair fanned out to modes a0..a{d-1}, b0..b{d-1}; the gate is d
// polarizing beam splitters on (a_i, b_i), depth 1.
GateCircuit buildCswap(int d, const FanoutSpec& fanout, Complex alpha, Complex beta);

// Exact permutation target: CNOT flips the target when the control is 1;
// CSWAP exchanges the two target digits. d is the target dimension (2 for
// Cnot).
GateMatrix targetMatrix(GateKind kind, int d = 2);

struct ExtractionResult {
    GateMatrix matrix;
    double maxLeakage = 0.0;
};

// Runs the gate on every encoded basis state and reads the matrix columns
// back off the output amplitudes. Rejects gates containing imperfect
// elements and any leakage out of the encoded subspace above kNormTol.
ExtractionResult extractLogicalUnitary(const Netlist& gate, const LogicalEncoding& enc);

struct PrepResult {
    PhotonicState state;
    std::vector<Complex> table;  // logical amplitudes, basis-indexed
    double leakage = 0.0;
};

// Runs the prep netlist from its source and decomposes the result over the
// encoded basis.
PrepResult prepLogicalState(const Netlist& prep, const LogicalEncoding& enc);

}  // namespace losim
