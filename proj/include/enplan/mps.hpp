// Fixed-format MPS writer and reader. Names are truncated to eight
// characters; collisions get deterministic replacement names and the full
// mapping is returned alongside the text. Values are written with
// round-trip precision so export -> parse -> export is byte-identical.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "enplan/lp.hpp"

namespace enplan::mps {

struct NameMap {
    // mps name -> original name, in emission order
    std::vector<std::pair<std::string, std::string>> rows;
    std::vector<std::pair<std::string, std::string>> columns;
};

struct ExportResult {
    std::string text;
    NameMap names;
};

ExportResult export_mps(const lp::LpInstance& instance);

/// Parses text produced by export_mps (or equivalent fixed MPS with one
/// coefficient pair per line or two). Throws on malformed input.
lp::LpInstance parse_mps(const std::string& text);

}  // namespace enplan::mps
