#include "losim/state.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace losim {

PhotonicState::PhotonicState(int photonNumber, std::vector<std::string> declaredModes)
    : photonNumber_(photonNumber), declaredModes_(std::move(declaredModes)) {
    if (photonNumber_ != 1 && photonNumber_ != 2)
        throw Error("photon number must be 1 or 2, got " + std::to_string(photonNumber_));
    for (size_t i = 0; i < declaredModes_.size(); ++i)
        for (size_t j = i + 1; j < declaredModes_.size(); ++j)
            if (declaredModes_[i] == declaredModes_[j])
                throw Error("duplicate declared mode '" + declaredModes_[i] + "'");
}

bool PhotonicState::declared(const std::string& spatial) const {
    return std::find(declaredModes_.begin(), declaredModes_.end(), spatial) !=
           declaredModes_.end();
}

void PhotonicState::add(const Monomial& m, Complex amplitude) {
    if (m.photons() != photonNumber_)
        throw Error("monomial has " + std::to_string(m.photons()) + " operators, state holds " +
                    std::to_string(photonNumber_) + " photons");
    for (const Mode& op : m.ops())
        if (!declared(op.spatial))
            throw Error("spatial mode '" + op.spatial + "' is not declared");
    terms_[m] += amplitude;
}

void PhotonicState::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < kMergeEps)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Complex PhotonicState::amplitude(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

double PhotonicState::normSquared() const {
    double n = 0.0;
    for (const auto& [m, amp] : terms_) n += std::norm(amp) * (m.doublyOccupied() ? 2.0 : 1.0);
    return n;
}

Complex innerProduct(const PhotonicState& s1, const PhotonicState& s2) {
    if (s1.photonNumber() != s2.photonNumber())
        throw Error("inner product between states of different photon number");
    // Walk the smaller term map.
    const PhotonicState& small = s1.terms().size() <= s2.terms().size() ? s1 : s2;
    const PhotonicState& large = &small == &s1 ? s2 : s1;
    Complex sum{0.0, 0.0};
    for (const auto& [m, amp] : small.terms()) {
        auto it = large.terms().find(m);
        if (it == large.terms().end()) continue;
        const double weight = m.doublyOccupied() ? 2.0 : 1.0;
        const Complex a1 = &small == &s1 ? amp : it->second;
        const Complex a2 = &small == &s1 ? it->second : amp;
        sum += std::conj(a1) * a2 * weight;
    }
    return sum;
}

namespace {

const ModeImage& imageOf(const ModeMap& map, const Mode& mode, ModeImage& scratch) {
    auto it = map.find(mode);
    if (it != map.end()) return it->second;
    scratch = {{mode, Complex{1.0, 0.0}}};
    return scratch;
}

}  // namespace

PhotonicState applyModeMap(const PhotonicState& s, const ModeMap& map) {
    for (const auto& [from, image] : map)
        for (const auto& [to, coeff] : image)
            if (!s.declared(to.spatial))
                throw Error("mode map targets undeclared spatial mode '" + to.spatial + "'");

    PhotonicState out(s.photonNumber(), s.declaredModes());
    ModeImage scratch1, scratch2;
    for (const auto& [m, amp] : s.terms()) {
        if (m.photons() == 1) {
            for (const auto& [to, coeff] : imageOf(map, m.ops()[0], scratch1))
                out.add(Monomial(to), amp * coeff);
        } else {
            const ModeImage& img1 = imageOf(map, m.ops()[0], scratch1);
            const ModeImage& img2 = imageOf(map, m.ops()[1], scratch2);
            for (const auto& [to1, c1] : img1)
                for (const auto& [to2, c2] : img2) out.add(Monomial(to1, to2), amp * c1 * c2);
        }
    }
    out.prune();
    return out;
}

bool modeMapIsUnitary(const ModeMap& map, const std::vector<std::string>& modes, double tol) {
    std::vector<Mode> basis;
    for (const std::string& spatial : modes) {
        basis.push_back({spatial, Pol::H});
        basis.push_back({spatial, Pol::V});
    }
    const size_t n = basis.size();
    std::map<Mode, size_t> index;
    for (size_t i = 0; i < n; ++i) index[basis[i]] = i;

    // Columns of the full matrix, identity on unmapped modes.
    std::vector<std::vector<Complex>> col(n, std::vector<Complex>(n, Complex{0.0, 0.0}));
    ModeImage scratch;
    for (size_t j = 0; j < n; ++j) {
        for (const auto& [to, coeff] : imageOf(map, basis[j], scratch)) {
            auto it = index.find(to);
            if (it == index.end()) return false;
            col[j][it->second] += coeff;
        }
    }
    for (size_t j = 0; j < n; ++j) {
        for (size_t k = j; k < n; ++k) {
            Complex dot{0.0, 0.0};
            for (size_t i = 0; i < n; ++i) dot += std::conj(col[j][i]) * col[k][i];
            const Complex expect = j == k ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            if (std::abs(dot - expect) > tol) return false;
        }
    }
    return true;
}

std::string formatDouble(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

struct Token {
    std::string text;
    int column;  // 1-based
};

std::vector<Token> splitTokens(const std::string& line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

double parseNumber(const Token& tok, int lineNo) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok.text, &pos);
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + tok.text + "'", lineNo, tok.column);
    }
    if (pos != tok.text.size() || !std::isfinite(v))
        throw ParseError("malformed number '" + tok.text + "'", lineNo, tok.column);
    return v;
}

int parseInt(const Token& tok, int lineNo) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(tok.text, &pos);
    } catch (const std::exception&) {
        throw ParseError("malformed integer '" + tok.text + "'", lineNo, tok.column);
    }
    if (pos != tok.text.size())
        throw ParseError("malformed integer '" + tok.text + "'", lineNo, tok.column);
    return v;
}

Mode parseModeToken(const Token& tok, int lineNo, const PhotonicState& state) {
    const size_t colon = tok.text.find(':');
    if (colon == std::string::npos || colon + 2 != tok.text.size())
        throw ParseError("expected <spatial>:<H|V>, got '" + tok.text + "'", lineNo, tok.column);
    const std::string spatial = tok.text.substr(0, colon);
    const char pc = tok.text[colon + 1];
    if (pc != 'H' && pc != 'V')
        throw ParseError("polarization must be H or V in '" + tok.text + "'", lineNo, tok.column);
    if (!state.declared(spatial))
        throw ParseError("undeclared spatial mode '" + spatial + "'", lineNo, tok.column);
    return {spatial, pc == 'H' ? Pol::H : Pol::V};
}

}  // namespace

PhotonicState readState(std::istream& in) {
    std::string line;
    int lineNo = 0;
    int photons = 0;
    std::vector<std::string> modes;
    bool sawPhotons = false;
    bool sawModes = false;
    PhotonicState state(1, {});

    while (std::getline(in, line)) {
        ++lineNo;
        const std::vector<Token> toks = splitTokens(line);
        if (toks.empty()) continue;
        const Token& head = toks[0];

        if (head.text == "photons") {
            if (sawPhotons) throw ParseError("duplicate photons directive", lineNo, head.column);
            if (toks.size() != 2)
                throw ParseError("photons takes one argument", lineNo, head.column);
            photons = parseInt(toks[1], lineNo);
            if (photons != 1 && photons != 2)
                throw ParseError("photon number must be 1 or 2", lineNo, toks[1].column);
            sawPhotons = true;
        } else if (head.text == "modes") {
            if (!sawPhotons)
                throw ParseError("modes before photons directive", lineNo, head.column);
            if (sawModes) throw ParseError("duplicate modes directive", lineNo, head.column);
            if (toks.size() < 2)
                throw ParseError("modes needs at least one label", lineNo, head.column);
            for (size_t i = 1; i < toks.size(); ++i) modes.push_back(toks[i].text);
            try {
                state = PhotonicState(photons, modes);
            } catch (const Error& e) {
                throw ParseError(e.what(), lineNo, head.column);
            }
            sawModes = true;
        } else if (head.text == "amp") {
            if (!sawModes) throw ParseError("amp before modes directive", lineNo, head.column);
            if (toks.size() != static_cast<size_t>(3 + photons))
                throw ParseError("amp takes <re> <im> and " + std::to_string(photons) +
                                     " mode token(s)",
                                 lineNo, head.column);
            const Complex amp{parseNumber(toks[1], lineNo), parseNumber(toks[2], lineNo)};
            if (photons == 1) {
                state.add(Monomial(parseModeToken(toks[3], lineNo, state)), amp);
            } else {
                state.add(Monomial(parseModeToken(toks[3], lineNo, state),
                                   parseModeToken(toks[4], lineNo, state)),
                          amp);
            }
        } else {
            throw ParseError("unknown directive '" + head.text + "'", lineNo, head.column);
        }
    }
    if (!sawPhotons) throw ParseError("missing photons directive", lineNo + 1, 1);
    if (!sawModes) throw ParseError("missing modes directive", lineNo + 1, 1);
    return state;
}

PhotonicState readStateFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open state file '" + path + "'");
    return readState(in);
}

void writeState(const PhotonicState& s, std::ostream& out) {
    out << "photons " << s.photonNumber() << "\n";
    out << "modes";
    for (const std::string& m : s.declaredModes()) out << ' ' << m;
    out << "\n";
    for (const auto& [m, amp] : s.terms()) {
        out << "amp " << formatDouble(amp.real()) << ' ' << formatDouble(amp.imag());
        for (const Mode& op : m.ops()) out << ' ' << op.spatial << ':' << polChar(op.pol);
        out << "\n";
    }
}

std::string writeStateString(const PhotonicState& s) {
    std::ostringstream os;
    writeState(s, os);
    return os.str();
}

}  // namespace losim
