#include "losim/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace losim {

namespace {

struct Token {
    std::string text;
    int column;  // 1-based
};

std::vector<Token> tokenizeLine(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

// Directive-line cursor; every accessor reports precise positions on failure.
class Args {
public:
    Args(const std::vector<Token>& tokens, int line) : tokens_(tokens), line_(line) {}

    const Token& directive() const { return tokens_.front(); }

    const Token& token(const char* what) { return take(what); }

    std::string label(const std::set<std::string>& declared) {
        const Token& t = take("spatial label");
        if (!isValidLabel(t.text))
            throw ParseError("invalid label '" + t.text + "'", line_, t.column);
        if (!declared.count(t.text))
            throw ParseError("undeclared mode '" + t.text + "'", line_, t.column);
        return t.text;
    }

    double number(const char* what) {
        const Token& t = take(what);
        const char* begin = t.text.c_str();
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end != begin + t.text.size())
            throw ParseError(std::string("malformed number '") + t.text + "' for " + what,
                             line_, t.column);
        return v;
    }

    void finish() {
        if (next_ < tokens_.size())
            throw ParseError("unexpected trailing token '" + tokens_[next_].text + "'",
                             line_, tokens_[next_].column);
    }

    bool exhausted() const { return next_ >= tokens_.size(); }

private:
    const Token& take(const char* what) {
        if (next_ >= tokens_.size()) {
            const Token& last = tokens_.back();
            throw ParseError(std::string("missing ") + what + " after '" +
                                 last.text + "'",
                             line_, last.column + static_cast<int>(last.text.size()));
        }
        return tokens_[next_++];
    }

    const std::vector<Token>& tokens_;
    int line_;
    std::size_t next_ = 1;  // 0 is the directive itself
};

// Rethrows element validation failures with the directive's position attached.
template <typename T>
void validateAt(const T& x, int line, int column) {
    try {
        validate(x);
    } catch (const Error& e) {
        throw ParseError(e.what(), line, column);
    }
}

}  // namespace

bool isValidLabel(const std::string& label) {
    if (label.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(label[0]))) return false;
    return std::all_of(label.begin() + 1, label.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

Netlist parseNetlist(const std::string& text) {
    Netlist n;
    std::set<std::string> declared;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto tokens = tokenizeLine(line);
        if (tokens.empty()) continue;
        Args args(tokens, lineNo);
        const Token& head = args.directive();
        if (head.text == "modes") {
            if (args.exhausted())
                throw ParseError("modes needs at least one label", lineNo,
                                 head.column);
            while (!args.exhausted()) {
                const Token& t = args.token("spatial label");
                if (!isValidLabel(t.text))
                    throw ParseError("invalid label '" + t.text + "'", lineNo,
                                     t.column);
                if (!declared.insert(t.text).second)
                    throw ParseError("duplicate mode '" + t.text + "'", lineNo,
                                     t.column);
                n.modes.push_back(t.text);
            }
        } else if (head.text == "bs") {
            BeamSplitter bs;
            bs.a = args.label(declared);
            bs.b = args.label(declared);
            bs.gamma = args.number("gamma");
            bs.delta = args.number("delta");
            args.finish();
            validateAt(bs, lineNo, head.column);
            n.elements.emplace_back(std::move(bs));
        } else if (head.text == "pbs") {
            IdealPbs pbs;
            pbs.a = args.label(declared);
            pbs.b = args.label(declared);
            args.finish();
            validateAt(pbs, lineNo, head.column);
            n.elements.emplace_back(std::move(pbs));
        } else if (head.text == "ipbs") {
            ImperfectPbs pbs;
            pbs.a = args.label(declared);
            pbs.b = args.label(declared);
            pbs.r = args.number("r");
            pbs.theta = args.number("theta");
            args.finish();
            validateAt(pbs, lineNo, head.column);
            n.elements.emplace_back(std::move(pbs));
        } else if (head.text == "spdc") {
            if (n.source)
                throw ParseError("multiple sources in one netlist", lineNo,
                                 head.column);
            SpdcSource src;
            src.a = args.label(declared);
            src.b = args.label(declared);
            double ar = args.number("alphaRe");
            double ai = args.number("alphaIm");
            double br = args.number("betaRe");
            double bi = args.number("betaIm");
            args.finish();
            src.alpha = {ar, ai};
            src.beta = {br, bi};
            validateAt(src, lineNo, head.column);
            n.source = std::move(src);
        } else if (head.text == "photon") {
            if (n.source)
                throw ParseError("multiple sources in one netlist", lineNo,
                                 head.column);
            PhotonSource src;
            src.spatial = args.label(declared);
            double ar = args.number("alphaRe");
            double ai = args.number("alphaIm");
            double br = args.number("betaRe");
            double bi = args.number("betaIm");
            args.finish();
            src.alpha = {ar, ai};
            src.beta = {br, bi};
            validateAt(src, lineNo, head.column);
            n.source = std::move(src);
        } else {
            throw ParseError("unknown directive '" + head.text + "'", lineNo,
                             head.column);
        }
    }
    return n;
}

Netlist parseNetlistFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open netlist file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseNetlist(buf.str());
}

std::string serializeNetlist(const Netlist& n) {
    std::ostringstream out;
    if (!n.modes.empty()) {
        out << "modes";
        for (const auto& m : n.modes) out << ' ' << m;
        out << '\n';
    }
    if (n.source) {
        if (const auto* spdc = std::get_if<SpdcSource>(&*n.source)) {
            out << "spdc " << spdc->a << ' ' << spdc->b << ' '
                << formatDouble(spdc->alpha.real()) << ' '
                << formatDouble(spdc->alpha.imag()) << ' '
                << formatDouble(spdc->beta.real()) << ' '
                << formatDouble(spdc->beta.imag()) << '\n';
        } else {
            const auto& ph = std::get<PhotonSource>(*n.source);
            out << "photon " << ph.spatial << ' '
                << formatDouble(ph.alpha.real()) << ' '
                << formatDouble(ph.alpha.imag()) << ' '
                << formatDouble(ph.beta.real()) << ' '
                << formatDouble(ph.beta.imag()) << '\n';
        }
    }
    for (const auto& e : n.elements) {
        if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
            out << "bs " << bs->a << ' ' << bs->b << ' ' << formatDouble(bs->gamma)
                << ' ' << formatDouble(bs->delta) << '\n';
        } else if (const auto* pbs = std::get_if<IdealPbs>(&e)) {
            out << "pbs " << pbs->a << ' ' << pbs->b << '\n';
        } else {
            const auto& ipbs = std::get<ImperfectPbs>(e);
            out << "ipbs " << ipbs.a << ' ' << ipbs.b << ' ' << formatDouble(ipbs.r)
                << ' ' << formatDouble(ipbs.theta) << '\n';
        }
    }
    return out.str();
}

PhotonicState executeNetlist(const Netlist& n, const PhotonicState& input) {
    for (const auto& m : n.modes)
        if (!input.declared(m))
            throw Error("input state does not declare netlist mode '" + m + "'");
    PhotonicState s = input;
    for (const auto& e : n.elements) s = applyElement(s, e);
    return s;
}

PhotonicState runPrep(const Netlist& n) {
    if (!n.source) throw Error("netlist has no source to prepare from");
    PhotonicState s = prepareSource(*n.source, n.modes);
    for (const auto& e : n.elements) s = applyElement(s, e);
    return s;
}

DepthReport analyzeDepth(const Netlist& n) {
    DepthReport report;
    report.elementCount = static_cast<int>(n.elements.size());
    std::map<std::string, int> perLabel;
    for (const auto& e : n.elements) {
        ++report.perKind[elementKind(e)];
        for (const auto& label : spatialLabels(e)) ++perLabel[label];
    }
    for (const auto& [label, count] : perLabel)
        report.opticalDepth = std::max(report.opticalDepth, count);
    return report;
}

}  // namespace losim
