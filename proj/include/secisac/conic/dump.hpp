#pragma once

#include <iosfwd>
#include <string>

#include "secisac/conic/program.hpp"

namespace secisac::conic {

// Plain-text canonical form for cross-checking with other solvers:
//
//   secisac-conic 1
//   vars <count> <n>
//   var <name> <real|complex|hermitian> <offset> <n_real> <dim>
//   sense <maximize|minimize>
//   objective_constant <value>
//   objective <nnz>          followed by "<index> <value>" lines
//   blocks <count>
//   block <cone> <row_offset> <dim> <psd_n> <tag> <label>
//   rows <m>
//   F <nnz>                  followed by "<row> <col> <value>" lines
//   g                        followed by m values
//   end
//
// Block rows satisfy F x + g in K; the exp cone is {(x, y, z): y exp(x/y) <= z}
// and psd blocks list a full matrix in column-major order.
inline constexpr int kProgramDumpVersion = 1;

void write_program(std::ostream& out, const CanonicalProgram& program);
CanonicalProgram read_program(std::istream& in);

void save_program(const CanonicalProgram& program, const std::string& path);
CanonicalProgram load_program(const std::string& path);

}  // namespace secisac::conic
