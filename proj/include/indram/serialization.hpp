#pragma once

#include <indram/coloring.hpp>
#include <indram/drc.hpp>
#include <indram/gadgets.hpp>
#include <indram/graph.hpp>
#include <indram/regularity.hpp>

#include <nlohmann/json.hpp>

#include <string>

namespace indram
{
    using Json = nlohmann::json;

    /// Compact dump with sorted keys and a trailing newline.
    [[nodiscard]] auto canonical_dump(const Json & j) -> std::string;
    /// Throws InvalidInput naming the file on I/O or syntax errors.
    [[nodiscard]] auto read_json_file(const std::string & path) -> Json;

    [[nodiscard]] auto to_json(const Graph & g) -> Json;
    /// `path` is the JSON pointer of `j` inside its document, used in error messages.
    [[nodiscard]] auto graph_from_json(const Json & j, const std::string & path = "") -> Graph;

    /// {"a","b","rows"}; a row is an integer bitmask when b <= 64, else an array of 64-bit words.
    [[nodiscard]] auto block_to_json(const Biadjacency & b) -> Json;
    [[nodiscard]] auto block_from_json(const Json & j, const std::string & path = "") -> Biadjacency;

    /// {"base","part_sizes","blocks":{"u-v":[[words]]}}.
    [[nodiscard]] auto to_json(const Blowup & b) -> Json;
    /// An optional "host" graph replaces the block-built host, so externally edited hosts can be verified.
    [[nodiscard]] auto blowup_from_json(const Json & j, const std::string & path = "") -> Blowup;

    /// {"q","colors":{"u-v":c}}.
    [[nodiscard]] auto to_json(const Graph & g, const EdgeColoring & c) -> Json;
    [[nodiscard]] auto coloring_from_json(const Graph & g, const Json & j, const std::string & path = "") -> EdgeColoring;

    [[nodiscard]] auto to_json(const Ratio & r) -> Json;
    [[nodiscard]] auto ratio_from_json(const Json & j, const std::string & path = "") -> Ratio;

    [[nodiscard]] auto to_json(const RegularityParams & p) -> Json;
    [[nodiscard]] auto to_json(const RegularityVerdict & v) -> Json;
    [[nodiscard]] auto to_json(const DensityVerdict & v) -> Json;
    [[nodiscard]] auto to_json(const GadgetCertificate & c) -> Json;
    [[nodiscard]] auto to_json(const SimDrcOutcome & o) -> Json;
    [[nodiscard]] auto to_json(const MatchingDecomposition & d) -> Json;

    /// Seeds are written as decimal strings so that 64-bit values survive every JSON reader.
    [[nodiscard]] auto seed_to_json(std::uint64_t seed) -> Json;

    /// Typed field access with pointer-path errors.
    [[nodiscard]] auto require(const Json & j, const std::string & key, const std::string & path) -> const Json &;
    [[nodiscard]] auto get_int(const Json & j, const std::string & path) -> std::int64_t;
}
