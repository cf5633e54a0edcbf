#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "losim/elements.hpp"
#include "losim/state.hpp"

namespace losim {

// Ordered circuit description: declared spatial labels, at most one source,
// elements in execution order. Immutable by convention once parsed or built.
struct Netlist {
    std::vector<std::string> modes;
    std::optional<Source> source;
    std::vector<Element> elements;

    friend bool operator==(const Netlist&, const Netlist&) = default;
};

// Structural metrics. opticalDepth is the maximum number of elements touching
// any one spatial label, so d polarizing beam splitters on disjoint pairs have
// depth 1.
struct DepthReport {
    int elementCount = 0;
    int opticalDepth = 0;
    std::map<std::string, int> perKind;
};

// Labels match [A-Za-z][A-Za-z0-9_]*.
bool isValidLabel(const std::string& label);

// Line-oriented grammar, `#` starts a comment:
//   modes <label>+
//   bs <a> <b> <gamma> <delta>
//   pbs <a> <b>
//   ipbs <a> <b> <r> <theta>
//   spdc <a> <b> <alphaRe> <alphaIm> <betaRe> <betaIm>
//   photon <a> <alphaRe> <alphaIm> <betaRe> <betaIm>
// Modes must be declared before any directive uses them; at most one source
// line is accepted. Violations raise ParseError with line and column.
Netlist parseNetlist(const std::string& text);
Netlist parseNetlistFile(const std::string& path);

// Canonical text form: one modes line, then the source, then elements in
// order. parseNetlist(serializeNetlist(n)) == n.
std::string serializeNetlist(const Netlist& n);

// Applies the elements in order; the source, if any, is ignored. The input
// must declare every netlist mode.
PhotonicState executeNetlist(const Netlist& n, const PhotonicState& input);

// Emits the source state over the netlist's modes, then runs the elements.
PhotonicState runPrep(const Netlist& n);

DepthReport analyzeDepth(const Netlist& n);

}  // namespace losim
