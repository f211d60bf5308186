#include "macro/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "macro/error.hpp"

namespace macro {

namespace {

constexpr int kMaxClasses = 20;

void check_class_count(int p)
{
    if (p < 1 || p > kMaxClasses)
        throw ValidationError("class count must be in [1, " + std::to_string(kMaxClasses) + "]");
}

std::uint64_t full_mask(int p) { return (std::uint64_t{1} << p) - 1; }

} // namespace

std::string to_string(ModeKind kind)
{
    switch (kind) {
    case ModeKind::oriented: return "oriented";
    case ModeKind::random: return "random";
    case ModeKind::all: return "all";
    }
    return "unknown";
}

ModeKind parse_mode_kind(const std::string& name)
{
    if (name == "oriented") return ModeKind::oriented;
    if (name == "random") return ModeKind::random;
    if (name == "all") return ModeKind::all;
    throw ValidationError("unknown mode kind '" + name + "'");
}

ActuationMode ActuationMode::oriented(std::uint64_t bits, int class_count)
{
    check_class_count(class_count);
    if (bits < 1 || bits > full_mask(class_count) - 1)
        throw ValidationError("oriented mode bits must be in [1, 2^p - 2]");
    ActuationMode m;
    m.kind = ModeKind::oriented;
    m.bits = bits;
    m.class_count = class_count;
    return m;
}

ActuationMode ActuationMode::all_on()
{
    return ActuationMode{};
}

std::string ActuationMode::bits_string() const
{
    if (kind != ModeKind::oriented) return {};
    std::string s(static_cast<std::size_t>(class_count), '0');
    for (int i = 0; i < class_count; ++i) {
        if (bits & (std::uint64_t{1} << i)) s[static_cast<std::size_t>(class_count - 1 - i)] = '1';
    }
    return s;
}

std::vector<ActuationMode> enumerate_oriented_modes(int class_count)
{
    check_class_count(class_count);
    std::vector<ActuationMode> modes;
    const std::uint64_t last = full_mask(class_count) - 1;
    modes.reserve(static_cast<std::size_t>(last));
    for (std::uint64_t b = 1; b <= last; ++b) modes.push_back(ActuationMode::oriented(b, class_count));
    return modes;
}

std::vector<std::size_t> edges_for_mode(const Mesh& mesh, const ActuationMode& mode)
{
    std::vector<std::size_t> on;
    switch (mode.kind) {
    case ModeKind::all:
        on.resize(mesh.edges.size());
        std::iota(on.begin(), on.end(), std::size_t{0});
        break;
    case ModeKind::oriented:
        if (mode.class_count != static_cast<int>(mesh.class_count()))
            throw ValidationError("mode has " + std::to_string(mode.class_count) + " class bits but mesh has " +
                                  std::to_string(mesh.class_count()) + " orientation classes");
        for (std::size_t k = 0; k < mesh.edges.size(); ++k) {
            if (mode.bits & (std::uint64_t{1} << mesh.edges[k].orientation_class)) on.push_back(k);
        }
        break;
    case ModeKind::random:
        for (std::size_t k : mode.on_edges) {
            if (k >= mesh.edges.size()) throw ValidationError("random mode references a missing edge");
        }
        on = mode.on_edges;
        break;
    }
    return on;
}

EdgeSampler::EdgeSampler(std::uint64_t seed) : engine_(seed) {}

std::uint64_t EdgeSampler::below(std::uint64_t bound)
{
    // Accept draws under the largest multiple of `bound` to avoid modulo bias.
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % bound + 1) % bound;
    std::uint64_t r = engine_();
    while (r > limit) r = engine_();
    return r % bound;
}

ActuationMode random_mode(const Mesh& mesh, double fraction, std::uint64_t seed)
{
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("fraction must be in (0, 1]");
    const std::size_t n = mesh.edges.size();
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));

    // Fisher-Yates shuffle truncated after the first k positions.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    EdgeSampler sampler(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(sampler.below(n - i));
        std::swap(perm[i], perm[j]);
    }
    perm.resize(k);
    std::sort(perm.begin(), perm.end());

    ActuationMode m;
    m.kind = ModeKind::random;
    m.on_edges = std::move(perm);
    m.fraction = fraction;
    m.seed = seed;
    return m;
}

std::vector<ActuationMode> spanning_set(int class_count)
{
    check_class_count(class_count);
    std::vector<ActuationMode> out;
    for (int i = 0; i < class_count; ++i) {
        ActuationMode m;
        m.kind = ModeKind::oriented;
        m.bits = std::uint64_t{1} << i;
        m.class_count = class_count;
        out.push_back(m);
    }
    return out;
}

StrainSummary superpose_strains(const std::map<int, StrainSummary>& base, const ActuationMode& mode)
{
    if (mode.kind == ModeKind::random) throw ValidationError("random modes cannot be superposed");
    StrainSummary sum;
    if (mode.kind == ModeKind::all) {
        for (const auto& [cls, s] : base) sum = sum + s;
        return sum;
    }
    for (int i = 0; i < mode.class_count; ++i) {
        if (!(mode.bits & (std::uint64_t{1} << i))) continue;
        auto it = base.find(i);
        if (it == base.end()) throw ValidationError("no base strain for class " + std::to_string(i));
        sum = sum + it->second;
    }
    return sum;
}

} // namespace macro
