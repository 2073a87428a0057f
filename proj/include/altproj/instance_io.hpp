#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "altproj/models.hpp"

namespace altproj {

enum class InstanceKind { random, two_lines, block_aligned, convex_combination, explicit_bases };

/**
 * Reproducible description of a problem instance.
 *
 * Text form (one key per line, '#' starts a comment):
 *
 *     altproj-instance v1
 *     kind random
 *     seed 7
 *     dim 8
 *     ranks 4 4 4
 *     end
 *
 * two_lines uses `theta`; block_aligned uses `blocks`, `angle_rule` and, for
 * the custom rule, `angles`; convex_combination uses `seed`, `dim`,
 * `weights` and one `product <ranks...>` line per term (term i is the random
 * instance with seed + i); explicit lists `dim` and one `subspace <rank>`
 * header per subspace followed by dim rows of re/im pairs.
 */
struct InstanceSpec {
    InstanceKind kind = InstanceKind::random;
    Seed seed = 0;
    Index dim = 0;
    std::vector<Index> ranks;
    Real theta = 0.0;
    int blocks = 0;
    AngleRule rule = AngleRule::inverse;
    std::vector<Real> angles;
    std::vector<Real> weights;
    std::vector<std::vector<Index>> products;
    std::vector<Matrix> bases;

    bool operator==(const InstanceSpec&) const = default;
};

InstanceSpec parse_instance(std::istream& in);
InstanceSpec parse_instance_file(const std::string& path);
std::string serialize_instance(const InstanceSpec& spec);

/// Subspace families of an instance; convex combinations carry one family per product.
struct Instance {
    std::vector<std::vector<Subspace>> families;
    std::vector<Real> weights;
    std::optional<BlockAlignedModel> block_model;
};

Instance materialize(const InstanceSpec& spec);

std::string kind_name(InstanceKind kind);

/// %.17g rendering used by every text artifact.
std::string format_real(Real v);

}  // namespace altproj
