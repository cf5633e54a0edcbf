#include "losim/fidelity.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>

#include "losim/gates.hpp"
#include "losim/netlist.hpp"

namespace losim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Work-stealing loop over [0, n); every slot is filled independently, so the
// result never depends on the thread count.
void parallelFor(int n, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr firstError;
    std::mutex errorLock;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> hold(errorLock);
                if (!firstError) firstError = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (firstError) std::rethrow_exception(firstError);
}

FanoutSpec d2Fanout(const CswapInputParams& in) {
    FanoutSpec spec;
    spec.d = 2;
    spec.n = 1;
    spec.q = 0;
    spec.paramsA = {{in.gamma, in.delta}};
    spec.paramsB = {{in.mu, in.nu}};
    return spec;
}

GateCircuit d2Circuit(const CswapInputParams& in) {
    return buildCswap(2, d2Fanout(in), in.alpha, in.beta);
}

Netlist imperfectD2Gate(const ImperfectionParams& imp) {
    Netlist gate;
    gate.modes = {"a0", "a1", "b0", "b1"};
    gate.elements = {ImperfectPbs{"a0", "b0", imp.r, imp.theta},
                     ImperfectPbs{"a1", "b1", imp.r, imp.theta}};
    return gate;
}

Netlist idealD2Gate() {
    Netlist gate;
    gate.modes = {"a0", "a1", "b0", "b1"};
    gate.elements = {IdealPbs{"a0", "b0"}, IdealPbs{"a1", "b1"}};
    return gate;
}

LogicalEncoding d2Encoding() {
    return LogicalEncoding{GateKind::Cswap, {"a0", "a1"}, {"b0", "b1"}};
}

double pbsC(const ImperfectionParams& imp) {
    return std::cos(imp.theta) - std::sqrt(imp.r) * std::sin(imp.theta);
}

double pbsS(const ImperfectionParams& imp) {
    return std::sin(imp.theta) + std::sqrt(imp.r) * std::cos(imp.theta);
}

}  // namespace

void validate(const ImperfectionParams& p) {
    if (!(p.r >= 0.0 && p.r <= 1.0))
        throw Error("extinction ratio outside [0,1]: " + formatDouble(p.r));
}

CswapInputParams CswapInputParams::fromAngles(double x, double y, double z) {
    return {std::cos(x), std::sin(x), std::cos(y), std::sin(y), std::cos(z),
            std::sin(z)};
}

void validate(const AverageFidelitySpec& spec) {
    validate(spec.params);
    if (spec.pointsPerAxis < 8)
        throw Error("quadrature needs at least 8 points per axis");
}

PhotonicState realOutputState(const CswapInputParams& in, const ImperfectionParams& imp) {
    validate(imp);
    return executeNetlist(imperfectD2Gate(imp), runPrep(d2Circuit(in).prep));
}

PhotonicState idealOutputState(const CswapInputParams& in) {
    const GateCircuit circuit = d2Circuit(in);
    return executeNetlist(circuit.gate, runPrep(circuit.prep));
}

double stateFidelity(const PhotonicState& real, const PhotonicState& ideal) {
    return std::norm(innerProduct(real, ideal));
}

double basisFidelity(int basisIndex, const ImperfectionParams& imp) {
    validate(imp);
    const LogicalEncoding enc = d2Encoding();
    const PhotonicState input = enc.encode(basisIndex);
    const PhotonicState ideal = executeNetlist(idealD2Gate(), input);
    const PhotonicState real = executeNetlist(imperfectD2Gate(imp), input);
    return stateFidelity(real, ideal);
}

double basisFidelityClosedForm(const ImperfectionParams& imp) {
    validate(imp);
    const double c2 = pbsC(imp) * pbsC(imp);
    const double p = 1.0 + imp.r;
    return (c2 / p) * (c2 / p);
}

double averageFidelityQuadrature(const AverageFidelitySpec& spec, int threads) {
    validate(spec);
    const int n = spec.pointsPerAxis;
    const int total = n * n * n;
    std::vector<double> values(total);
    parallelFor(total, threads, [&](int k) {
        const int ix = k / (n * n);
        const int iy = (k / n) % n;
        const int iz = k % n;
        const CswapInputParams in = CswapInputParams::fromAngles(
            kTwoPi * ix / n, kTwoPi * iy / n, kTwoPi * iz / n);
        values[k] = stateFidelity(realOutputState(in, spec.params), idealOutputState(in));
    });
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / total;
}

double averageFidelityClosedForm(const ImperfectionParams& imp) {
    validate(imp);
    const double c = pbsC(imp);
    const double s = pbsS(imp);
    const double p2 = (1.0 + imp.r) * (1.0 + imp.r);
    return c * c * c * c / p2 + (3.0 / 16.0) * s * s * s * s / p2;
}

double comparisonFidelity000(const ImperfectionParams& imp) {
    const double p = 1.0 + imp.r;
    return basisFidelityClosedForm(imp) / (p * p);
}

double comparisonFidelity100(const ImperfectionParams& imp, const ComparisonParams& cmp) {
    const Complex bracket = Complex(0.0, 1.0) * (1.0 + cmp.epsilon) *
                            (1.0 - std::exp(Complex(0.0, kTwoPi / 2.0 - cmp.deltaPhi))) /
                            (2.0 + 2.0 * cmp.epsilon + cmp.epsilon * cmp.epsilon);
    const Complex fourth = bracket * bracket * bracket * bracket;
    return comparisonFidelity000(imp) * std::norm(fourth);
}

void validate(const SurfaceSpec& spec) {
    if (spec.rSteps < 1 || spec.thetaSteps < 1)
        throw Error("surface grid needs at least one step per axis");
    if (spec.rMax < spec.rMin || spec.thetaMax < spec.thetaMin)
        throw Error("surface ranges must be monotone");
    validate(ImperfectionParams{spec.rMin, spec.thetaMin});
    validate(ImperfectionParams{spec.rMax, spec.thetaMax});
    if (spec.method == FidelityMethod::StateOverlap)
        throw Error("surface supports closed-form and quadrature methods");
    if (spec.method == FidelityMethod::Quadrature && spec.quadraturePoints < 8)
        throw Error("quadrature needs at least 8 points per axis");
}

std::vector<FidelityReport> fidelitySurface(const SurfaceSpec& spec) {
    validate(spec);
    const int total = spec.rSteps * spec.thetaSteps;
    std::vector<FidelityReport> grid(total);
    const double rStep =
        spec.rSteps > 1 ? (spec.rMax - spec.rMin) / (spec.rSteps - 1) : 0.0;
    const double thetaStep =
        spec.thetaSteps > 1 ? (spec.thetaMax - spec.thetaMin) / (spec.thetaSteps - 1)
                            : 0.0;
    parallelFor(total, spec.threads, [&](int k) {
        const int ir = k / spec.thetaSteps;
        const int it = k % spec.thetaSteps;
        const ImperfectionParams p{spec.rMin + ir * rStep,
                                   spec.thetaMin + it * thetaStep};
        FidelityReport& report = grid[k];
        report.params = p;
        report.method = spec.method;
        if (spec.method == FidelityMethod::ClosedForm) {
            report.value = averageFidelityClosedForm(p);
        } else {
            report.value = averageFidelityQuadrature({p, spec.quadraturePoints}, 1);
        }
    });
    return grid;
}

void validate(const CurvesSpec& spec) {
    if (spec.points < 2) throw Error("curve sweep needs at least two points");
    if (spec.sweepR)
        validate(ImperfectionParams{0.0, spec.fixedValue});
    else
        validate(ImperfectionParams{spec.fixedValue, 0.0});
}

std::vector<CurveRow> fidelityCurves(const CurvesSpec& spec) {
    validate(spec);
    const double max = spec.sweepR ? 1e-3 : 5e-3;
    std::vector<CurveRow> rows(spec.points);
    parallelFor(spec.points, spec.threads, [&](int k) {
        const double x = max * k / (spec.points - 1);
        const ImperfectionParams p = spec.sweepR
                                         ? ImperfectionParams{x, spec.fixedValue}
                                         : ImperfectionParams{spec.fixedValue, x};
        rows[k] = {x, basisFidelity(0, p), comparisonFidelity000(p),
                   comparisonFidelity100(p, spec.cmp)};
    });
    return rows;
}

}  // namespace losim
