#include "benjamin/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "benjamin/csv.hpp"
#include "benjamin/error.hpp"
#include "benjamin/spectral.hpp"

namespace benjamin {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"run", {"scenario"}},
        {"wave", {"gamma", "c"}},
        {"grid", {"n", "L"}},
        {"evolution",
         {"dt", "T", "dealias", "record_every", "frame", "sponge", "sponge_strength", "sponge_width", "sponge_reference"}},
        {"perturbation", {"shape", "amplitude", "seed", "width", "center", "kmax"}},
        {"analysis", {"R_list", "vartheta", "functional", "b", "gamma_list", "eps0", "lambda", "samples", "eps"}},
        {"output", {"dir"}},
    };
    return keys;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw Error(ErrorCode::ConfigError, "invalid value '" + value + "' for " + key);
}

double to_double(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        bad_value(key, s);
    }
    if (pos != s.size() || !std::isfinite(v)) bad_value(key, s);
    return v;
}

long long to_integer(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        bad_value(key, s);
    }
    if (pos != s.size()) bad_value(key, s);
    return v;
}

bool to_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "off" || s == "no") return false;
    bad_value(key, s);
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) bad_value(key, s);
        out.push_back(to_double(key, item.substr(first, last - first + 1)));
    }
    if (out.empty()) bad_value(key, s);
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    return s;
}

PerturbationShape to_shape(const std::string& key, const std::string& s) {
    for (auto p : {PerturbationShape::None, PerturbationShape::Even, PerturbationShape::Odd, PerturbationShape::Noise}) {
        if (s == to_string(p)) return p;
    }
    bad_value(key, s);
}

}  // namespace

const char* to_string(PerturbationShape shape) {
    switch (shape) {
    case PerturbationShape::None: return "none";
    case PerturbationShape::Even: return "even";
    case PerturbationShape::Odd: return "odd";
    case PerturbationShape::Noise: return "noise";
    }
    return "none";
}

Grid ExperimentConfig::grid() const { return Grid(n, L); }

EvolutionConfig ExperimentConfig::evolution(double frame_speed) const {
    EvolutionConfig e;
    e.dt = dt;
    e.T = T;
    e.dealias = dealias;
    e.record_every = record_every;
    e.keep_snapshots = true;
    e.frame_speed = frame == FrameKind::Comoving ? frame_speed : 0.0;
    if (sponge) e.sponge = Sponge{sponge_strength, sponge_width, std::nullopt};
    return e;
}

EvolutionConfig ExperimentConfig::evolution(double frame_speed, const Field& background) const {
    EvolutionConfig e = evolution(frame_speed);
    if (e.sponge && sponge_reference && frame == FrameKind::Comoving) e.sponge->reference = background;
    return e;
}

void ExperimentConfig::validate() const {
    try {
        const Grid g = grid();
        wave.validate_on(g);
        evolution(wave.c).validate(g);
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
    if (!(perturbation.amplitude >= 0.0)) throw Error(ErrorCode::ConfigError, "perturbation amplitude must be >= 0");
    if (!(perturbation.width > 0.0)) throw Error(ErrorCode::ConfigError, "perturbation width must be positive");
    if (perturbation.kmax < 1 || static_cast<std::size_t>(perturbation.kmax) > n / 3) {
        throw Error(ErrorCode::ConfigError, "perturbation kmax must lie in [1, n/3]");
    }
    for (double r : radii) {
        if (!(r > 0.0)) throw Error(ErrorCode::ConfigError, "R_list entries must be positive");
    }
    if (!(vartheta >= 0.375 && vartheta <= 0.625)) throw Error(ErrorCode::ConfigError, "vartheta must lie in [3/8, 5/8]");
    if (!(b > 0.0 && b < 1.0 / 64.0)) throw Error(ErrorCode::ConfigError, "b must lie in (0, 2^-6)");
    if (!(eps0 > 0.0)) throw Error(ErrorCode::ConfigError, "eps0 must be positive");
    if (lambda == 0.0) throw Error(ErrorCode::ConfigError, "lambda must be non-zero");
    if (samples < 1) throw Error(ErrorCode::ConfigError, "samples must be >= 1");
    if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorCode::ConfigError, "eps must lie in (0, 1/2]");
    if (out_dir.empty()) throw Error(ErrorCode::ConfigError, "output dir must not be empty");
}

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
    ExperimentConfig cfg;
    for (const auto& [section, body] : tree) {
        const auto known = known_keys().find(section);
        if (known == known_keys().end()) {
            if (body.empty()) throw Error(ErrorCode::ConfigError, "key '" + section + "' outside a section");
            throw Error(ErrorCode::ConfigError, "unknown section [" + section + "]");
        }
        for (const auto& [key, node] : body) {
            if (!known->second.count(key)) {
                throw Error(ErrorCode::ConfigError, "unknown key '" + key + "' in [" + section + "]");
            }
            const std::string v = node.get_value<std::string>();
            const std::string name = section + "." + key;
            if (name == "run.scenario") cfg.scenario = v;
            else if (name == "wave.gamma") cfg.wave.gamma = to_double(name, v);
            else if (name == "wave.c") cfg.wave.c = to_double(name, v);
            else if (name == "grid.n") {
                const long long n = to_integer(name, v);
                if (n <= 0) bad_value(name, v);
                cfg.n = static_cast<std::size_t>(n);
            } else if (name == "grid.L") cfg.L = to_double(name, v);
            else if (name == "evolution.dt") cfg.dt = to_double(name, v);
            else if (name == "evolution.T") cfg.T = to_double(name, v);
            else if (name == "evolution.dealias") cfg.dealias = to_bool(name, v);
            else if (name == "evolution.record_every") cfg.record_every = static_cast<int>(to_integer(name, v));
            else if (name == "evolution.frame") {
                if (v == "lab") cfg.frame = FrameKind::Lab;
                else if (v == "comoving") cfg.frame = FrameKind::Comoving;
                else bad_value(name, v);
            } else if (name == "evolution.sponge") cfg.sponge = to_bool(name, v);
            else if (name == "evolution.sponge_strength") cfg.sponge_strength = to_double(name, v);
            else if (name == "evolution.sponge_width") cfg.sponge_width = to_double(name, v);
            else if (name == "evolution.sponge_reference") cfg.sponge_reference = to_bool(name, v);
            else if (name == "perturbation.shape") cfg.perturbation.shape = to_shape(name, v);
            else if (name == "perturbation.amplitude") cfg.perturbation.amplitude = to_double(name, v);
            else if (name == "perturbation.seed") {
                const long long s = to_integer(name, v);
                if (s < 0) bad_value(name, v);
                cfg.perturbation.seed = static_cast<std::uint64_t>(s);
            } else if (name == "perturbation.width") cfg.perturbation.width = to_double(name, v);
            else if (name == "perturbation.center") cfg.perturbation.center = to_double(name, v);
            else if (name == "perturbation.kmax") cfg.perturbation.kmax = static_cast<int>(to_integer(name, v));
            else if (name == "analysis.R_list") cfg.radii = to_list(name, v);
            else if (name == "analysis.vartheta") cfg.vartheta = to_double(name, v);
            else if (name == "analysis.functional") cfg.functional = v;
            else if (name == "analysis.b") cfg.b = to_double(name, v);
            else if (name == "analysis.gamma_list") cfg.gammas = to_list(name, v);
            else if (name == "analysis.eps0") cfg.eps0 = to_double(name, v);
            else if (name == "analysis.lambda") cfg.lambda = to_double(name, v);
            else if (name == "analysis.samples") cfg.samples = static_cast<int>(to_integer(name, v));
            else if (name == "analysis.eps") cfg.eps = to_double(name, v);
            else if (name == "output.dir") cfg.out_dir = v;
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
    return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
    out << "[run]\nscenario = " << cfg.scenario << "\n\n";
    out << "[wave]\ngamma = " << format_double(cfg.wave.gamma) << "\nc = " << format_double(cfg.wave.c) << "\n\n";
    out << "[grid]\nn = " << cfg.n << "\nL = " << format_double(cfg.L) << "\n\n";
    out << "[evolution]\ndt = " << format_double(cfg.dt) << "\nT = " << format_double(cfg.T)
        << "\ndealias = " << (cfg.dealias ? "true" : "false") << "\nrecord_every = " << cfg.record_every
        << "\nframe = " << (cfg.frame == FrameKind::Lab ? "lab" : "comoving")
        << "\nsponge = " << (cfg.sponge ? "true" : "false")
        << "\nsponge_strength = " << format_double(cfg.sponge_strength)
        << "\nsponge_width = " << format_double(cfg.sponge_width)
        << "\nsponge_reference = " << (cfg.sponge_reference ? "true" : "false") << "\n\n";
    const auto& p = cfg.perturbation;
    out << "[perturbation]\nshape = " << to_string(p.shape) << "\namplitude = " << format_double(p.amplitude)
        << "\nseed = " << p.seed << "\nwidth = " << format_double(p.width) << "\ncenter = " << format_double(p.center)
        << "\nkmax = " << p.kmax << "\n\n";
    out << "[analysis]\nR_list = " << join(cfg.radii) << "\nvartheta = " << format_double(cfg.vartheta)
        << "\nfunctional = " << cfg.functional << "\nb = " << format_double(cfg.b)
        << "\ngamma_list = " << join(cfg.gammas) << "\neps0 = " << format_double(cfg.eps0)
        << "\nlambda = " << format_double(cfg.lambda) << "\nsamples = " << cfg.samples
        << "\neps = " << format_double(cfg.eps) << "\n\n";
    out << "[output]\ndir = " << cfg.out_dir << "\n";
}

Field make_perturbation(const PerturbationSpec& spec, const Field& reference) {
    const Grid& grid = reference.grid();
    const double w = spec.width;
    const double x0 = spec.center;
    Field p = Field::zeros(grid);
    switch (spec.shape) {
    case PerturbationShape::None: return p;
    case PerturbationShape::Even:
        p = Field::from_function(grid, [&](double x) { return 1.0 / std::cosh((x - x0) / w); });
        break;
    case PerturbationShape::Odd:
        p = Field::from_function(grid, [&](double x) { return std::tanh((x - x0) / w) / std::cosh((x - x0) / w); });
        break;
    case PerturbationShape::Noise: {
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        Spectrum s(grid.spectral_size());
        for (int k = 1; k <= spec.kmax; ++k) s[k] = {normal(rng), normal(rng)};
        const Field noise = Field::from_spectrum(grid, std::move(s));
        // localized envelope several widths wide
        const Field envelope =
            Field::from_function(grid, [&](double x) { return 1.0 / std::cosh((x - x0) / (8.0 * w)); });
        p = noise.times(envelope);
        break;
    }
    }
    const double size = norm(p, NormKind::H1);
    if (size == 0.0 || spec.amplitude == 0.0) return Field::zeros(grid);
    return p * (spec.amplitude * norm(reference, NormKind::H1) / size);
}

}  // namespace benjamin
