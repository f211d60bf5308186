#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "macro/strain_metrics.hpp"
#include "macro/tiling.hpp"

namespace macro {

enum class ModeKind { oriented, random, all };

std::string to_string(ModeKind kind);
ModeKind parse_mode_kind(const std::string& name);

/// Which edges of a mesh contract. Oriented modes switch whole orientation
/// classes: bit i of `bits` drives the i-th class in ascending angle order.
struct ActuationMode {
    ModeKind kind = ModeKind::all;
    std::uint64_t bits = 0;
    int class_count = 0;
    std::vector<std::size_t> on_edges;  // random kind, ascending
    double fraction = 0.0;
    std::uint64_t seed = 0;

    /// Throws unless 1 <= bits <= 2^p - 2.
    static ActuationMode oriented(std::uint64_t bits, int class_count);
    static ActuationMode all_on();

    /// Oriented: the bitmask value. Other kinds: 0.
    std::uint64_t mode_id() const { return kind == ModeKind::oriented ? bits : 0; }

    /// Bitmask as a binary string, class 0 last (least significant). Empty for non-oriented kinds.
    std::string bits_string() const;

    bool operator==(const ActuationMode&) const = default;
};

/// The 2^p - 2 non-trivial oriented modes in ascending mode_id order.
std::vector<ActuationMode> enumerate_oriented_modes(int class_count);

/// ON edge indices, ascending.
std::vector<std::size_t> edges_for_mode(const Mesh& mesh, const ActuationMode& mode);

/// Samples round(fraction * edges) edges without replacement.
ActuationMode random_mode(const Mesh& mesh, double fraction, std::uint64_t seed);

/// Single-class modes, ascending mode_id (1, 2, 4, ...).
std::vector<ActuationMode> spanning_set(int class_count);

/// Sum of the single-class strain summaries over the mode's set bits.
/// `base` is keyed by class index. The all-ON kind sums every entry.
StrainSummary superpose_strains(const std::map<int, StrainSummary>& base, const ActuationMode& mode);

/// Uniform integer in [0, bound) from a 64-bit Mersenne Twister stream by
/// rejection sampling; the sequence is identical on every platform.
class EdgeSampler {
public:
    explicit EdgeSampler(std::uint64_t seed);
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

} // namespace macro
