#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "json.hpp"

#include "clk/cover.hpp"
#include "clk/membership.hpp"
#include "clk/plan.hpp"
#include "clk/scheme.hpp"

namespace clk {

/*
 * Piece-based label layouts. Every label starts with the varint vertex id.
 *   local (0x03):      id, piece list (depth capped at r = m(2t+1))
 *   general (0x04):    id, varint bit count, packed sentence bits, piece list
 *   scattered (0x05):  id, union list (one entry per color multiset union)
 *   counting (0x06):   id, union list (per color, or per color set)
 *   expansion (0x02):  id, alpha list (one entry per V_alpha containing the vertex)
 */
BuildResult build_local_scheme(const ColoredGraph& g, const BuildOptions& options);
BuildResult build_general_scheme(const ColoredGraph& g, const BuildOptions& options);
BuildResult build_scattered_scheme(const ColoredGraph& g, const BuildOptions& options);
BuildResult build_counting_scheme(const ColoredGraph& g, const BuildOptions& options);
BuildResult build_bounded_scheme(const ColoredGraph& g, const BuildOptions& options);

std::unique_ptr<Decoder> make_local_decoder(const Catalog& catalog);
std::unique_ptr<Decoder> make_general_decoder(const Catalog& catalog);
std::unique_ptr<Decoder> make_scattered_decoder(const Catalog& catalog);
std::unique_ptr<Decoder> make_counting_decoder(const Catalog& catalog);
std::unique_ptr<Decoder> make_bounded_decoder(const Catalog& catalog);

/*
 * The cover a scheme runs on: the user cover if given (its r must be at
 * least `r`), otherwise a ball or unit-interval cover of radius r. Unless
 * `options.force`, every r-ball is checked and a miss raises CoverDefect.
 */
Cover resolve_cover(const ColoredGraph& g, const BuildOptions& options, Distance r, nlohmann::json& report);
nlohmann::json cover_json(const Cover& cover);

// First vertex color free for marker predicates: above the graph palette and every color the nodes mention.
Color marker_base(const ColoredGraph& g, std::span<const NodePtr> nodes);

/*
 * Answers one local plan from piece lists: recovers the distance type by
 * distance tests inside pieces, evaluates each component in the smallest
 * piece holding the t-balls of its arguments, then combines.
 */
class LocalAnswerer {
public:
    LocalAnswerer(PieceCache& cache, std::atomic<std::uint64_t>& ops) : cache_(cache), ops_(ops) {}

    DistanceType distance_type(const LocalPlan& plan, std::span<const PieceArg> args);
    bool answer(const LocalPlan& plan, std::span<const PieceArg> args, const std::vector<std::vector<PieceArg>>& sets);

private:
    PieceCache& cache_;
    std::atomic<std::uint64_t>& ops_;
};

// Catalog sections of a piece-based scheme built on a cover; returns per-vertex piece lists.
std::vector<std::vector<MembershipOut>> build_cover_pieces(const ColoredGraph& g, const Cover& cover,
                                                           const PieceLabeler& labeler, Distance depth_cap,
                                                           Catalog& catalog);

std::string piece_section(std::uint32_t id);

/*
 * Counting covers: a kernel point x of piece U (N^k(x) inside U) must be
 * farther than k from every other piece of U's color.
 */
struct KernelSeparation {
    bool ok = true;
    std::size_t checked = 0;
    std::string witness;
};

KernelSeparation check_kernel_separation(const ColoredGraph& g, const Cover& cover,
                                         const std::vector<std::uint32_t>& gamma, Distance k);

}  // namespace clk
