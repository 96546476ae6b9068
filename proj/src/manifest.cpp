#include "torus/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "torus/error.hpp"

namespace torus {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (const T& v : values) {
        if (!out.empty()) out += ' ';
        if constexpr (std::is_same_v<T, double>) {
            out += fmt(v);
        } else {
            out += std::to_string(v);
        }
    }
    return out;
}

class LineParser {
public:
    LineParser(int line, std::string key) : line_(line), key_(std::move(key)) {}

    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::ConfigError,
                    "manifest line " + std::to_string(line_) + " (" + key_ + "): " + why);
    }

    double number(const std::string& text) const {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            fail("expected a number, got '" + text + "'");
        }
        if (used != text.size()) fail("expected a number, got '" + text + "'");
        return v;
    }

    int integer(const std::string& text) const {
        const double v = number(text);
        if (v != static_cast<int>(v)) fail("expected an integer, got '" + text + "'");
        return static_cast<int>(v);
    }

    std::vector<double> numbers(const std::string& text) const {
        std::istringstream in(text);
        std::vector<double> out;
        std::string tok;
        while (in >> tok) out.push_back(number(tok));
        return out;
    }

    std::vector<std::uint64_t> seeds(const std::string& text) const {
        std::istringstream in(text);
        std::vector<std::uint64_t> out;
        std::string tok;
        while (in >> tok) {
            std::size_t used = 0;
            std::uint64_t v = 0;
            try {
                v = std::stoull(tok, &used);
            } catch (const std::exception&) {
                fail("expected an unsigned 64-bit seed, got '" + tok + "'");
            }
            if (used != tok.size() || tok.front() == '-') fail("expected an unsigned 64-bit seed, got '" + tok + "'");
            out.push_back(v);
        }
        return out;
    }

    Vec2 vec(const std::string& text) const {
        const auto v = numbers(text);
        if (v.size() != 2) fail("expected two numbers");
        return {v[0], v[1]};
    }

private:
    int line_;
    std::string key_;
};

}  // namespace

LatticeBasis ExperimentManifest::basis() const {
    if (xi.has_value() != eta.has_value()) {
        throw Error(ErrorCode::ConfigError, "explicit basis needs both xi and eta");
    }
    if (xi) return LatticeBasis(*xi, *eta);
    return lattice_preset(preset);
}

Grid ExperimentManifest::grid() const { return Grid(basis(), n1, n2); }

SolverConfig ExperimentManifest::solver_config() const {
    SolverConfig c{grid()};
    c.dt = dt;
    c.t_end = t_end;
    c.diag_stride = diag_stride;
    c.dealias = dealias;
    c.snapshot_times = snapshot_times;
    c.snapshot_dir = output_dir;
    return c;
}

ExperimentManifest parse_manifest(const std::string& text) {
    ExperimentManifest m;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw Error(ErrorCode::ConfigError, "manifest line " + std::to_string(line_no) + ": bad section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "lattice" && section != "grid" && section != "solver" && section != "experiment") {
                throw Error(ErrorCode::ConfigError,
                            "manifest line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigError, "manifest line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const LineParser p(line_no, section + "." + key);
        const std::string full = section + "." + key;

        if (full == "lattice.preset") {
            m.preset = value;
        } else if (full == "lattice.xi") {
            m.xi = p.vec(value);
        } else if (full == "lattice.eta") {
            m.eta = p.vec(value);
        } else if (full == "grid.n1") {
            m.n1 = p.integer(value);
        } else if (full == "grid.n2") {
            m.n2 = p.integer(value);
        } else if (full == "solver.dt") {
            m.dt = p.number(value);
        } else if (full == "solver.t_end") {
            m.t_end = p.number(value);
        } else if (full == "solver.diag_stride") {
            m.diag_stride = p.integer(value);
        } else if (full == "solver.dealias") {
            if (value == "two_thirds") {
                m.dealias = Dealias::TwoThirds;
            } else if (value == "none") {
                m.dealias = Dealias::None;
            } else {
                p.fail("expected two_thirds or none");
            }
        } else if (full == "solver.integrator") {
            if (value != "rk4") p.fail("only rk4 is available");
        } else if (full == "experiment.coeffs") {
            m.coeffs = value;
        } else if (full == "experiment.epsilon") {
            m.epsilons = p.numbers(value);
        } else if (full == "experiment.seeds") {
            m.seeds = p.seeds(value);
        } else if (full == "experiment.p_norm") {
            m.p_norm = p.number(value);
        } else if (full == "experiment.output_dir") {
            m.output_dir = value;
        } else if (full == "experiment.snapshot_times") {
            m.snapshot_times = p.numbers(value);
        } else {
            p.fail(section.empty() ? "key outside any section" : "unknown key");
        }
    }
    return m;
}

std::string emit_manifest(const ExperimentManifest& m) {
    std::ostringstream out;
    out << "[lattice]\n";
    out << "preset = " << m.preset << '\n';
    if (m.xi) out << "xi = " << fmt(m.xi->x) << ' ' << fmt(m.xi->y) << '\n';
    if (m.eta) out << "eta = " << fmt(m.eta->x) << ' ' << fmt(m.eta->y) << '\n';
    out << "\n[grid]\n";
    out << "n1 = " << m.n1 << '\n';
    out << "n2 = " << m.n2 << '\n';
    out << "\n[solver]\n";
    out << "dt = " << fmt(m.dt) << '\n';
    out << "t_end = " << fmt(m.t_end) << '\n';
    out << "diag_stride = " << m.diag_stride << '\n';
    out << "dealias = " << (m.dealias == Dealias::TwoThirds ? "two_thirds" : "none") << '\n';
    out << "integrator = rk4\n";
    out << "\n[experiment]\n";
    out << "coeffs = " << m.coeffs << '\n';
    out << "epsilon = " << join(m.epsilons) << '\n';
    out << "seeds = " << join(m.seeds) << '\n';
    out << "p_norm = " << fmt(m.p_norm) << '\n';
    out << "output_dir = " << m.output_dir << '\n';
    out << "snapshot_times = " << join(m.snapshot_times) << '\n';
    return out.str();
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open manifest " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_manifest(text.str());
}

}  // namespace torus
