#include "losim/gates.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace losim {

namespace {

int floorLog2(int d) {
    int n = 0;
    while ((1 << (n + 1)) <= d) ++n;
    return n;
}

// Walks the steps backward, splitting weight in proportion to how many final
// modes each branch feeds; forward application then lands 1/sqrt(d) on every
// digit.
std::vector<BsParam> uniformParams(const std::vector<FanoutStep>& steps, int d) {
    std::vector<int> leaves(d, 1);
    std::vector<BsParam> params(steps.size());
    for (int k = static_cast<int>(steps.size()) - 1; k >= 0; --k) {
        const FanoutStep& st = steps[k];
        const double total = leaves[st.from] + leaves[st.to];
        const double stay = std::sqrt(leaves[st.from] / total);
        const double cross = std::sqrt(leaves[st.to] / total);
        params[k] = st.xOnFrom ? BsParam{stay, cross} : BsParam{cross, stay};
        leaves[st.from] += leaves[st.to];
    }
    return params;
}

BeamSplitter stepElement(const FanoutStep& st, const BsParam& p,
                         const std::vector<std::string>& labels) {
    const double stay = st.xOnFrom ? p.x : p.y;
    const double cross = st.xOnFrom ? p.y : p.x;
    return BeamSplitter{labels[st.from], labels[st.to], stay, cross};
}

}  // namespace

GateMatrix::GateMatrix(int dimension)
    : dim_(dimension), entries_(static_cast<std::size_t>(dimension) * dimension) {
    if (dimension < 1) throw Error("matrix dimension must be positive");
}

bool GateMatrix::isUnitary(double tol) const {
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            Complex dot = 0.0;
            for (int k = 0; k < dim_; ++k) dot += std::conj(at(k, i)) * at(k, j);
            if (std::abs(dot - (i == j ? 1.0 : 0.0)) > tol) return false;
        }
    }
    return true;
}

bool GateMatrix::isPermutation() const {
    std::vector<int> rowOnes(dim_, 0), colOnes(dim_, 0);
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            const Complex& e = at(i, j);
            if (e == Complex(1.0)) {
                ++rowOnes[i];
                ++colOnes[j];
            } else if (e != Complex(0.0)) {
                return false;
            }
        }
    }
    return std::all_of(rowOnes.begin(), rowOnes.end(), [](int c) { return c == 1; }) &&
           std::all_of(colOnes.begin(), colOnes.end(), [](int c) { return c == 1; });
}

double GateMatrix::maxAbsDiff(const GateMatrix& other) const {
    if (other.dim_ != dim_) throw Error("matrix dimension mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < entries_.size(); ++k)
        worst = std::max(worst, std::abs(entries_[k] - other.entries_[k]));
    return worst;
}

int LogicalEncoding::dimension() const {
    const int d = targetDim();
    return kind == GateKind::Cnot ? 2 * d : 2 * d * d;
}

int LogicalEncoding::indexOf(const Label& label) const {
    const int d = targetDim();
    if (label.control < 0 || label.control > 1 || label.i < 0 || label.i >= d)
        throw Error("logical label out of range");
    if (kind == GateKind::Cnot) {
        if (label.j != 0) throw Error("logical label out of range");
        return label.control * d + label.i;
    }
    if (label.j < 0 || label.j >= d) throw Error("logical label out of range");
    return label.control * d * d + label.i * d + label.j;
}

LogicalEncoding::Label LogicalEncoding::labelAt(int index) const {
    if (index < 0 || index >= dimension()) throw Error("logical index out of range");
    const int d = targetDim();
    if (kind == GateKind::Cnot) return {index / d, index % d, 0};
    return {index / (d * d), (index / d) % d, index % d};
}

std::string LogicalEncoding::labelText(int index) const {
    const Label l = labelAt(index);
    const char* sep = targetDim() > 10 ? "," : "";
    std::string text = "|" + std::to_string(l.control) + sep + std::to_string(l.i);
    if (kind == GateKind::Cswap) text += sep + std::to_string(l.j);
    return text + ">";
}

Monomial LogicalEncoding::monomialAt(int index) const {
    const Label l = labelAt(index);
    const Pol pol = l.control == 1 ? Pol::H : Pol::V;
    if (kind == GateKind::Cnot) return Monomial({targetA[l.i], pol});
    return Monomial({targetA[l.i], pol}, {targetB[l.j], pol});
}

std::vector<std::string> LogicalEncoding::allModes() const {
    std::vector<std::string> modes = targetA;
    modes.insert(modes.end(), targetB.begin(), targetB.end());
    return modes;
}

PhotonicState LogicalEncoding::encode(int index) const {
    PhotonicState s(kind == GateKind::Cnot ? 1 : 2, allModes());
    s.add(monomialAt(index), 1.0);
    return s;
}

Decomposition decode(const LogicalEncoding& enc, const PhotonicState& s) {
    const int expected = enc.kind == GateKind::Cnot ? 1 : 2;
    if (s.photonNumber() != expected)
        throw Error("state photon number does not match the encoding");
    Decomposition dec;
    dec.amplitudes.resize(enc.dimension());
    double captured = 0.0;
    for (int k = 0; k < enc.dimension(); ++k) {
        dec.amplitudes[k] = s.amplitude(enc.monomialAt(k));
        captured += std::norm(dec.amplitudes[k]);
    }
    dec.leakage = std::max(0.0, s.normSquared() - captured);
    return dec;
}

std::vector<FanoutStep> fanoutStepsA(int d) {
    if (d < 2) throw Error("fan-out needs d >= 2");
    if (d == 3) return {{0, 2, true}, {0, 1, true}};
    std::vector<FanoutStep> steps;
    const int n = floorLog2(d);
    const int q = d - (1 << n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < (1 << k); ++i) steps.push_back({i, i + (1 << k), true});
    for (int j = 0; j < q; ++j) steps.push_back({j, (1 << n) + j, true});
    return steps;
}

std::vector<FanoutStep> fanoutStepsB(int d) {
    std::vector<FanoutStep> steps = fanoutStepsA(d);
    for (FanoutStep& st : steps) {
        st.from = d - 1 - st.from;
        st.to = d - 1 - st.to;
        st.xOnFrom = false;
    }
    return steps;
}

FanoutSpec FanoutSpec::uniform(int d) {
    if (d < 2) throw Error("fan-out needs d >= 2");
    FanoutSpec spec;
    spec.d = d;
    spec.n = floorLog2(d);
    spec.q = d - (1 << spec.n);
    spec.paramsA = uniformParams(fanoutStepsA(d), d);
    spec.paramsB = uniformParams(fanoutStepsB(d), d);
    return spec;
}

void validate(const FanoutSpec& spec) {
    if (spec.d < 2) throw Error("fan-out needs d >= 2");
    if (spec.q < 0 || spec.q >= (1 << spec.n) || (1 << spec.n) + spec.q != spec.d)
        throw Error("fan-out spec violates d = 2^n + q");
    if (spec.paramsA.size() != static_cast<std::size_t>(spec.d - 1) ||
        spec.paramsB.size() != static_cast<std::size_t>(spec.d - 1))
        throw Error("fan-out needs d-1 splitter parameters per side");
    for (const auto* side : {&spec.paramsA, &spec.paramsB})
        for (const BsParam& p : *side)
            if (std::abs(p.x * p.x + p.y * p.y - 1.0) > kNormTol)
                throw Error("splitter parameters not normalized: x^2+y^2 = " +
                            formatDouble(p.x * p.x + p.y * p.y));
}

GateCircuit buildCnot(double gamma, double delta, Complex alpha, Complex beta) {
    const BeamSplitter bs{"a", "b", gamma, delta};
    validate(bs);
    const PhotonSource src{"a", alpha, beta};
    validate(src);
    GateCircuit g;
    g.prep.modes = {"a", "b"};
    g.prep.source = src;
    g.prep.elements = {bs};
    g.gate.modes = {"a", "b"};
    g.gate.elements = {IdealPbs{"a", "b"}};
    g.encoding = LogicalEncoding{GateKind::Cnot, {"a", "b"}, {}};
    return g;
}

GateCircuit buildCswap(int d, const FanoutSpec& fanout, Complex alpha, Complex beta) {
    if (d < 2) throw Error("cswap needs d >= 2");
    if (fanout.d != d) throw Error("fan-out spec is for a different dimension");
    validate(fanout);

    std::vector<std::string> aModes, bModes;
    for (int i = 0; i < d; ++i) {
        aModes.push_back("a" + std::to_string(i));
        bModes.push_back("b" + std::to_string(i));
    }
    const SpdcSource src{aModes.front(), bModes.back(), alpha, beta};
    validate(src);

    GateCircuit g;
    g.prep.modes = aModes;
    g.prep.modes.insert(g.prep.modes.end(), bModes.begin(), bModes.end());
    g.prep.source = src;
    const auto stepsA = fanoutStepsA(d);
    const auto stepsB = fanoutStepsB(d);
    for (int k = 0; k + 1 < d; ++k) {
        g.prep.elements.emplace_back(stepElement(stepsA[k], fanout.paramsA[k], aModes));
        g.prep.elements.emplace_back(stepElement(stepsB[k], fanout.paramsB[k], bModes));
    }
    g.gate.modes = g.prep.modes;
    for (int i = 0; i < d; ++i) g.gate.elements.emplace_back(IdealPbs{aModes[i], bModes[i]});
    g.encoding = LogicalEncoding{GateKind::Cswap, aModes, bModes};
    return g;
}

GateMatrix targetMatrix(GateKind kind, int d) {
    if (kind == GateKind::Cnot) {
        if (d != 2) throw Error("cnot target is a qubit");
        GateMatrix m(4);
        for (int c = 0; c < 2; ++c)
            for (int t = 0; t < 2; ++t) m.at(c * 2 + (t ^ c), c * 2 + t) = 1.0;
        return m;
    }
    if (d < 2) throw Error("cswap needs d >= 2");
    GateMatrix m(2 * d * d);
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const int col = c * d * d + i * d + j;
                const int row = c == 0 ? col : c * d * d + j * d + i;
                m.at(row, col) = 1.0;
            }
    return m;
}

ExtractionResult extractLogicalUnitary(const Netlist& gate, const LogicalEncoding& enc) {
    for (const Element& e : gate.elements)
        if (std::holds_alternative<ImperfectPbs>(e))
            throw Error("logical extraction requires ideal elements only");
    const int dim = enc.dimension();
    ExtractionResult res{GateMatrix(dim), 0.0};
    for (int col = 0; col < dim; ++col) {
        const PhotonicState out = executeNetlist(gate, enc.encode(col));
        const Decomposition dec = decode(enc, out);
        if (dec.leakage > kNormTol)
            throw Error("gate leaves the encoded subspace on " + enc.labelText(col) +
                        ", leakage " + formatDouble(dec.leakage));
        res.maxLeakage = std::max(res.maxLeakage, dec.leakage);
        for (int row = 0; row < dim; ++row) res.matrix.at(row, col) = dec.amplitudes[row];
    }
    return res;
}

PrepResult prepLogicalState(const Netlist& prep, const LogicalEncoding& enc) {
    PhotonicState s = runPrep(prep);
    Decomposition dec = decode(enc, s);
    return {std::move(s), std::move(dec.amplitudes), dec.leakage};
}

}  // namespace losim
