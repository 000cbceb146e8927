#pragma once

#include <indram/cleaning.hpp>
#include <indram/serialization.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace indram
{
    /// Exit codes of the command-line tool.
    inline constexpr int exit_ok = 0;
    inline constexpr int exit_violation = 1;
    inline constexpr int exit_usage = 2;

    [[nodiscard]] auto to_json(const Graph & base, const CleaningOutcome & o) -> Json;

    /// args[0] is the program name. Canonical JSON goes to `out`, diagnostics to `err`.
    auto run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;
}
