#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lockbox/engine.hpp"
#include "lockbox/protocols.hpp"

namespace lockbox {

enum class Column : std::uint8_t { NoBroadcast, NoSignaling, NoBitCommitment, KeyDistribution, KeyStorage };
inline constexpr std::array<Column, 5> kColumns = {Column::NoBroadcast, Column::NoSignaling, Column::NoBitCommitment,
                                                   Column::KeyDistribution, Column::KeyStorage};

std::string_view to_string(Column c);

/// Yes: the axiom holds / the task is possible. No: violated / impossible.
enum class Mark : std::uint8_t { Yes, No, NotApplicable };

struct AxiomCell {
  Mark mark = Mark::NotApplicable;
  std::string witness;
};

struct AxiomRow {
  std::string theory;
  std::array<AxiomCell, 5> cells;
};

/// Cell text: ✓, ✗, VIOLATED (an axiom column that fails) or n/a.
std::string cell_text(Column c, Mark m);

/// Runs the desk-scale suite for every theory.
std::vector<AxiomRow> axiom_matrix(std::uint64_t seed = 1);

/// The classification the suite is expected to reproduce; NotApplicable
/// entries are unconstrained.
std::vector<std::pair<std::string, std::array<Mark, 5>>> expected_matrix();

/// Cells that disagree with expected_matrix(), as "theory/column".
std::vector<std::string> matrix_mismatches(const std::vector<AxiomRow>& rows);

ordered_json to_json(const std::vector<AxiomRow>& rows);
std::string render_table(const std::vector<AxiomRow>& rows);

}  // namespace lockbox
