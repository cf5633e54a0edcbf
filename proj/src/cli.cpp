#include "losim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "losim/fidelity.hpp"
#include "losim/gates.hpp"
#include "losim/netlist.hpp"
#include "losim/state.hpp"

namespace losim {

namespace {

// Writes via a sibling temp file and renames it into place, so a failed run
// never leaves a partial file at the destination.
void writeFileAtomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open output file: " + tmp);
        out << content;
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw Error("write failed: " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot move output into place: " + path);
    }
}

void emit(const std::optional<std::string>& outPath, const std::string& content) {
    if (outPath)
        writeFileAtomic(*outPath, content);
    else
        std::cout << content;
}

GateCircuit buildNamedGate(const std::string& gate, int d) {
    if (gate == "cnot") return buildCnot(1.0, 0.0, 1.0, 0.0);
    return buildCswap(d, FanoutSpec::uniform(d), std::sqrt(0.5), std::sqrt(0.5));
}

int cmdVerify(const std::string& gate, int d) {
    const GateCircuit circuit = buildNamedGate(gate, d);
    const ExtractionResult ext = extractLogicalUnitary(circuit.gate, circuit.encoding);
    const GateKind kind = gate == "cnot" ? GateKind::Cnot : GateKind::Cswap;
    const double deviation = ext.matrix.maxAbsDiff(targetMatrix(kind, d));
    const bool pass = deviation < kNormTol;
    std::cout << gate;
    if (kind == GateKind::Cswap) std::cout << " d=" << d;
    std::cout << " max deviation " << formatDouble(deviation)
              << (pass ? " PASS" : " FAIL") << "\n";
    return pass ? 0 : 1;
}

int cmdSimulate(const std::string& netlistPath, const std::optional<std::string>& inPath,
                const std::optional<std::string>& outPath) {
    const Netlist n = parseNetlistFile(netlistPath);
    const PhotonicState out =
        inPath ? executeNetlist(n, readStateFile(*inPath)) : runPrep(n);
    emit(outPath, writeStateString(out));
    return 0;
}

int cmdSurface(const SurfaceSpec& spec, const std::optional<std::string>& outPath) {
    const std::vector<FidelityReport> grid = fidelitySurface(spec);
    std::ostringstream csv;
    csv << "r,theta,F\n";
    for (const FidelityReport& point : grid)
        csv << formatDouble(point.params.r) << ',' << formatDouble(point.params.theta)
            << ',' << formatDouble(point.value) << '\n';
    emit(outPath, csv.str());
    return 0;
}

int cmdCurves(const CurvesSpec& spec, const std::optional<std::string>& outPath) {
    const std::vector<CurveRow> rows = fidelityCurves(spec);
    std::ostringstream csv;
    csv << "x,F_ours,F_cmp000,F_cmp100\n";
    for (const CurveRow& row : rows)
        csv << formatDouble(row.x) << ',' << formatDouble(row.fOurs) << ','
            << formatDouble(row.fCmp000) << ',' << formatDouble(row.fCmp100) << '\n';
    emit(outPath, csv.str());
    return 0;
}

void printDepthLine(const char* name, const DepthReport& report) {
    std::cout << name << ": " << report.elementCount
              << (report.elementCount == 1 ? " element" : " elements") << ", depth "
              << report.opticalDepth;
    if (!report.perKind.empty()) {
        std::cout << " (";
        bool first = true;
        for (const auto& [kind, count] : report.perKind) {
            if (!first) std::cout << ", ";
            std::cout << kind << ' ' << count;
            first = false;
        }
        std::cout << ')';
    }
    std::cout << "\n";
}

int cmdDepth(const std::string& gate, int d) {
    const GateCircuit circuit = buildNamedGate(gate, d);
    printDepthLine("gate", analyzeDepth(circuit.gate));
    printDepthLine("prep", analyzeDepth(circuit.prep));
    if (gate == "cswap") std::cout << "d " << d << " depth 1\n";
    return 0;
}

}  // namespace

int runCli(int argc, const char* const* argv) {
    CLI::App app{"Simulator and verifier for linear-optical CNOT and controlled-SWAP "
                 "gates with a polarization control and spatial targets"};
    app.require_subcommand(1);

    std::string gate = "cnot";
    int d = 2;
    auto addGateFlags = [&](CLI::App* cmd) {
        cmd->add_option("--gate", gate, "Gate to build: cnot or cswap")
            ->required()
            ->check(CLI::IsMember({"cnot", "cswap"}));
        cmd->add_option("--d", d, "Target qudit dimension (cswap)")
            ->check(CLI::Range(2, 1024));
    };

    CLI::App* verify =
        app.add_subcommand("verify", "Check a gate circuit against its target unitary");
    addGateFlags(verify);

    CLI::App* depth = app.add_subcommand("depth", "Report element counts and depth");
    addGateFlags(depth);

    CLI::App* simulate =
        app.add_subcommand("simulate", "Run a netlist on a state (or on its source)");
    std::string netlistPath;
    std::optional<std::string> inPath, outPath;
    simulate->add_option("--netlist", netlistPath, "Netlist file")->required();
    simulate->add_option("--in", inPath,
                         "Input state file; omitted, the netlist's source is used");
    simulate->add_option("--out", outPath, "Output state file (default stdout)");

    CLI::App* surface =
        app.add_subcommand("surface", "Average-fidelity CSV over an (r, theta) grid");
    SurfaceSpec surfaceSpec;
    std::string method = "closed";
    std::optional<std::string> surfaceOut;
    surface->add_option("--r-min", surfaceSpec.rMin, "Grid minimum for r");
    surface->add_option("--r-max", surfaceSpec.rMax, "Grid maximum for r");
    surface->add_option("--theta-min", surfaceSpec.thetaMin, "Grid minimum for theta");
    surface->add_option("--theta-max", surfaceSpec.thetaMax, "Grid maximum for theta");
    surface->add_option("--r-steps", surfaceSpec.rSteps, "Grid points along r")
        ->check(CLI::PositiveNumber);
    surface->add_option("--theta-steps", surfaceSpec.thetaSteps, "Grid points along theta")
        ->check(CLI::PositiveNumber);
    surface->add_option("--method", method, "closed or quadrature")
        ->check(CLI::IsMember({"closed", "quadrature"}));
    surface->add_option("--points", surfaceSpec.quadraturePoints,
                        "Quadrature points per axis");
    surface->add_option("--threads", surfaceSpec.threads, "Worker threads")
        ->check(CLI::PositiveNumber);
    surface->add_option("--out", surfaceOut, "CSV output file (default stdout)");

    CLI::App* curves =
        app.add_subcommand("curves", "Fidelity-vs-imperfection CSV with baselines");
    CurvesSpec curvesSpec;
    std::string fixed;
    std::optional<std::string> curvesOut;
    curves->add_option("--fixed", fixed, "Held parameter, e.g. theta=5e-3 or r=1e-3")
        ->required();
    curves->add_option("--epsilon", curvesSpec.cmp.epsilon,
                       "Splitter imperfection of the comparison scheme");
    curves->add_option("--delta-phi", curvesSpec.cmp.deltaPhi,
                       "Phase-shifter error of the comparison scheme");
    curves->add_option("--threads", curvesSpec.threads, "Worker threads")
        ->check(CLI::PositiveNumber);
    curves->add_option("--out", curvesOut, "CSV output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(verify) || app.got_subcommand(depth)) {
            if (gate == "cnot" && d != 2) {
                std::cerr << "error: cnot has a fixed two-level target\n";
                return 2;
            }
            return app.got_subcommand(verify) ? cmdVerify(gate, d) : cmdDepth(gate, d);
        }
        if (app.got_subcommand(simulate)) return cmdSimulate(netlistPath, inPath, outPath);
        if (app.got_subcommand(surface)) {
            surfaceSpec.method = method == "closed" ? FidelityMethod::ClosedForm
                                                    : FidelityMethod::Quadrature;
            return cmdSurface(surfaceSpec, surfaceOut);
        }
        const auto eq = fixed.find('=');
        const std::string key = fixed.substr(0, eq == std::string::npos ? fixed.size() : eq);
        if (eq == std::string::npos || (key != "r" && key != "theta")) {
            std::cerr << "error: --fixed expects r=<value> or theta=<value>\n";
            return 2;
        }
        const std::string valueText = fixed.substr(eq + 1);
        char* end = nullptr;
        curvesSpec.fixedValue = std::strtod(valueText.c_str(), &end);
        if (valueText.empty() || end != valueText.c_str() + valueText.size()) {
            std::cerr << "error: malformed number in --fixed: '" << valueText << "'\n";
            return 2;
        }
        curvesSpec.sweepR = key == "theta";
        return cmdCurves(curvesSpec, curvesOut);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace losim
