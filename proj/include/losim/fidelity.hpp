#pragma once

#include <vector>

#include "losim/state.hpp"

namespace losim {

// Shared imperfection model of every polarizing beam splitter in the d=2
// controlled-SWAP: extinction ratio r and mount deviation theta.
struct ImperfectionParams {
    double r = 0.0;
    double theta = 0.0;
};

void validate(const ImperfectionParams& p);

// Imperfections of the comparison scheme's splitters and phase shifters.
struct ComparisonParams {
    double epsilon = 0.0;
    double deltaPhi = 0.0;
};

// Real input-state parameters (alpha, beta) for the photon pair and
// (gamma, delta), (mu, nu) for the two prep splitters; each pair normalized.
struct CswapInputParams {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 1.0;
    double delta = 0.0;
    double mu = 1.0;
    double nu = 0.0;

    // (cos x, sin x, cos y, sin y, cos z, sin z)
    static CswapInputParams fromAngles(double x, double y, double z);
};

enum class FidelityMethod { ClosedForm, Quadrature, StateOverlap };

struct FidelityReport {
    double value = 1.0;
    FidelityMethod method = FidelityMethod::ClosedForm;
    ImperfectionParams params;
};

// Average fidelity as the uniform mean of |<psi_real|psi_out>|^2 over the
// three input angles. The integrand is a trigonometric polynomial of degree
// at most 4 per axis, so any uniform grid with 8 or more points per axis
// integrates it exactly; 16 is the default safety margin.
struct AverageFidelitySpec {
    ImperfectionParams params;
    int pointsPerAxis = 16;
};

void validate(const AverageFidelitySpec& spec);

// Output of the d=2 controlled-SWAP built from imperfect splitters, fed with
// the exact prepared input (prep itself is taken as perfect).
PhotonicState realOutputState(const CswapInputParams& in, const ImperfectionParams& imp);

// Output of the ideal gate on the same input.
PhotonicState idealOutputState(const CswapInputParams& in);

// |<real|ideal>|^2 for normalized states.
double stateFidelity(const PhotonicState& real, const PhotonicState& ideal);

// Fidelity of one computational basis input (index in the d=2 basis order),
// computed by simulation. All eight come out equal.
double basisFidelity(int basisIndex, const ImperfectionParams& imp);

// The same quantity in closed form: (cos th - sqrt r sin th)^4 / (1+r)^2.
double basisFidelityClosedForm(const ImperfectionParams& imp);

double averageFidelityQuadrature(const AverageFidelitySpec& spec, int threads = 1);
double averageFidelityClosedForm(const ImperfectionParams& imp);

// Baselines of the earlier path-polarization scheme, evaluated as given.
double comparisonFidelity000(const ImperfectionParams& imp);
double comparisonFidelity100(const ImperfectionParams& imp, const ComparisonParams& cmp);

// Grid sweep over (r, theta), row-major in r then theta; grid endpoints are
// inclusive, a single step pins the range minimum.
struct SurfaceSpec {
    double rMin = 0.0;
    double rMax = 1e-3;
    double thetaMin = 0.0;
    double thetaMax = 5e-3;
    int rSteps = 51;
    int thetaSteps = 51;
    FidelityMethod method = FidelityMethod::ClosedForm;
    int quadraturePoints = 16;
    int threads = 1;
};

void validate(const SurfaceSpec& spec);

// Deterministic for fixed spec regardless of thread count: points are
// computed into their grid slots independently.
std::vector<FidelityReport> fidelitySurface(const SurfaceSpec& spec);

// One swept parameter (r or theta), the other held fixed; our simulated
// basis fidelity next to the two comparison baselines.
struct CurveRow {
    double x = 0.0;
    double fOurs = 1.0;
    double fCmp000 = 1.0;
    double fCmp100 = 1.0;
};

struct CurvesSpec {
    bool sweepR = true;      // sweep r in [0, 1e-3] with theta fixed,
    double fixedValue = 0.0;  // otherwise theta in [0, 5e-3] with r fixed
    ComparisonParams cmp{0.02, 0.08726646259971647};  // pi / 36
    int points = 101;
    int threads = 1;
};

void validate(const CurvesSpec& spec);

std::vector<CurveRow> fidelityCurves(const CurvesSpec& spec);

}  // namespace losim
