#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "benjamin/evolution.hpp"
#include "benjamin/grid.hpp"
#include "benjamin/solitary_wave.hpp"

namespace benjamin {

enum class PerturbationShape { None, Even, Odd, Noise };
const char* to_string(PerturbationShape shape);

struct PerturbationSpec {
    PerturbationShape shape = PerturbationShape::Even;
    double amplitude = 0.01;  ///< |p|_{H1} relative to |Q|_{H1}
    std::uint64_t seed = 1;
    double width = 2.0;
    double center = 0.0;
    int kmax = 64;  ///< highest noise mode
};

enum class FrameKind { Lab, Comoving };

struct ExperimentConfig {
    std::string scenario = "default";
    WaveParams wave{0.1, 1.0};
    std::size_t n = 2048;
    double L = 400.0;

    double dt = 5e-4;
    double T = 10.0;
    bool dealias = true;
    int record_every = 2000;
    FrameKind frame = FrameKind::Comoving;
    bool sponge = true;
    double sponge_strength = 1.0;
    double sponge_width = 40.0;
    /// In the comoving frame, damp toward the unperturbed wave instead of zero.
    bool sponge_reference = true;

    PerturbationSpec perturbation;

    std::vector<double> radii{10.0, 20.0, 40.0, 80.0};
    double vartheta = 0.5;
    std::string functional = "I_right";
    double b = 1e-3;
    std::vector<double> gammas{0.2, 0.1, 0.05, 0.025};
    double eps0 = 1.0;    ///< proximity threshold for inf_y |u - Q(. - y)|_{H1}
    double lambda = 1.1;  ///< rescale factor
    int samples = 200;    ///< commutator ensemble size
    double eps = 0.1;     ///< exponent slack in the derivative commutator bound

    std::string out_dir = "out";

    Grid grid() const;
    /// Evolution settings; keep_snapshots is set.
    EvolutionConfig evolution(double frame_speed) const;
    /// Same, with `background` as sponge reference when sponge_reference is set
    /// and the frame is comoving.
    EvolutionConfig evolution(double frame_speed, const Field& background) const;
    /// Throws ConfigError.
    void validate() const;
};

/// Sectioned key = value text.  Unknown sections or keys, malformed values
/// and invalid settings raise ConfigError.
ExperimentConfig parse_config(std::istream& in);
/// Throws IoError naming the path when the file cannot be read.
ExperimentConfig load_config(const std::string& path);
/// Writes every key in the format read by parse_config.
void write_config(std::ostream& out, const ExperimentConfig& cfg);

/// Perturbation scaled to amplitude * |reference|_{H1}.
Field make_perturbation(const PerturbationSpec& spec, const Field& reference);

}  // namespace benjamin
