#pragma once

#include <string_view>
#include <vector>

#include "wavetwin/filters.hpp"
#include "wavetwin/map.hpp"

namespace wavetwin {

enum class Tree { A, B };

/// Tree assignment per axis: first letter along y (rows), second along x (columns).
enum class TreeCombo { AA, AB, BA, BB };

Tree tree_along_y(TreeCombo c);
Tree tree_along_x(TreeCombo c);
TreeCombo parse_tree_combo(std::string_view s);
const char* to_string(TreeCombo c);

/// One stage of a 1D packet tree: orthonormal taps applied as
/// y[n] = sum_k x[step*n + start + k] * taps[k] (periodic).
struct StageBank {
    const std::vector<double>* lo = nullptr;
    const std::vector<double>* hi = nullptr;
    int start = 0;
};

/// Natural-frequency packet index <-> branch path (stage-0 bit is most significant).
unsigned path_of_frequency_index(unsigned f);
unsigned frequency_index_of_path(unsigned path);

/// Filters applied at `stage` (0-based) to the node reached through `path`
/// (the `stage` branch bits taken so far) in the given tree.
///
/// Stage 0 uses the first-stage bank, tree b offset by delay_offset samples.
/// Later stages use the Q-shift bank; tree b switches to its time-reversed
/// partner until the path has taken a highpass branch after stage 0, after
/// which both trees share identical filters.
StageBank stage_bank(const FilterPair& pair, Tree tree, unsigned path, int stage);

/// Equivalent 1D impulse responses (cross-correlation taps starting at
/// `start`) for all 2^J packets of one tree, in natural frequency order.
struct EquivalentFilter {
    std::vector<double> taps;
    int start = 0;
};
std::vector<EquivalentFilter> equivalent_filters_1d(const FilterPair& pair, Tree tree, int depth);

/// Full 2D wavelet packet decomposition to `depth` with periodic extension.
///
/// Returns 4^J packets indexed fy * 2^J + fx in natural frequency order.
/// Each side must be divisible by 2^J. With last_stage_undecimated the final
/// stage keeps its input rate, so packets are (rows/2^(J-1)) x (cols/2^(J-1)).
std::vector<FeatureMap> wpt_forward(const FeatureMap& x, const FilterPair& pair, TreeCombo combo,
                                    int depth, bool last_stage_undecimated = false);

/// Inverse of wpt_forward (adjoint; scaled by 1/4 for an undecimated last stage).
FeatureMap wpt_inverse(const std::vector<FeatureMap>& packets, const FilterPair& pair,
                       TreeCombo combo, int depth, bool last_stage_undecimated = false);

}  // namespace wavetwin
