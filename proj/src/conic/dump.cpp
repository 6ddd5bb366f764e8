#include "secisac/conic/dump.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace secisac::conic {

namespace {

std::string token(std::string s) {
  if (s.empty()) return "-";
  for (char& ch : s)
    if (ch == ' ' || ch == '\t' || ch == '\n') ch = '_';
  return s;
}

std::string kind_name(VarKind k) {
  switch (k) {
    case VarKind::real: return "real";
    case VarKind::complex: return "complex";
    case VarKind::hermitian: return "hermitian";
  }
  return "real";
}

VarKind kind_from(const std::string& s) {
  if (s == "real") return VarKind::real;
  if (s == "complex") return VarKind::complex;
  if (s == "hermitian") return VarKind::hermitian;
  throw std::runtime_error("program dump: unknown variable kind " + s);
}

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word) throw std::runtime_error("program dump: expected '" + word + "', got '" + got + "'");
}

}  // namespace

void write_program(std::ostream& out, const CanonicalProgram& cp) {
  out << std::setprecision(17);
  out << "secisac-conic " << kProgramDumpVersion << "\n";
  out << "vars " << cp.variables.size() << " " << cp.n << "\n";
  for (const auto& v : cp.variables)
    out << "var " << token(v.name) << " " << kind_name(v.kind) << " " << v.offset << " " << v.n_real << " " << v.dim
        << "\n";
  out << "sense " << (cp.maximize ? "maximize" : "minimize") << "\n";
  out << "objective_constant " << cp.objective_constant << "\n";
  int nnz = 0;
  for (Eigen::Index i = 0; i < cp.objective.size(); ++i) nnz += cp.objective[i] != 0.0;
  out << "objective " << nnz << "\n";
  for (Eigen::Index i = 0; i < cp.objective.size(); ++i)
    if (cp.objective[i] != 0.0) out << i << " " << cp.objective[i] << "\n";
  out << "blocks " << cp.blocks.size() << "\n";
  for (const auto& b : cp.blocks)
    out << "block " << to_string(b.cone) << " " << b.row_offset << " " << b.dim << " " << b.psd_dim << " "
        << token(b.tag) << " " << token(b.label) << "\n";
  out << "rows " << cp.g.size() << "\n";
  out << "F " << cp.f.nonZeros() << "\n";
  for (int k = 0; k < cp.f.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(cp.f, k); it; ++it)
      out << it.row() << " " << it.col() << " " << it.value() << "\n";
  out << "g\n";
  for (Eigen::Index i = 0; i < cp.g.size(); ++i) out << cp.g[i] << "\n";
  out << "end\n";
}

CanonicalProgram read_program(std::istream& in) {
  CanonicalProgram cp;
  expect(in, "secisac-conic");
  int version = 0;
  in >> version;
  if (version != kProgramDumpVersion) throw std::runtime_error("program dump: unsupported version");
  std::size_t nvars = 0;
  expect(in, "vars");
  in >> nvars >> cp.n;
  for (std::size_t i = 0; i < nvars; ++i) {
    VariableInfo v;
    std::string kind;
    expect(in, "var");
    in >> v.name >> kind >> v.offset >> v.n_real >> v.dim;
    v.kind = kind_from(kind);
    cp.variables.push_back(v);
  }
  std::string sense;
  expect(in, "sense");
  in >> sense;
  cp.maximize = sense == "maximize";
  expect(in, "objective_constant");
  in >> cp.objective_constant;
  int nnz = 0;
  expect(in, "objective");
  in >> nnz;
  cp.objective = RVec::Zero(cp.n);
  for (int k = 0; k < nnz; ++k) {
    int i = 0;
    double v = 0.0;
    in >> i >> v;
    cp.objective[i] = v;
  }
  std::size_t nblocks = 0;
  expect(in, "blocks");
  in >> nblocks;
  for (std::size_t k = 0; k < nblocks; ++k) {
    ConeBlock b;
    std::string cone;
    expect(in, "block");
    in >> cone >> b.row_offset >> b.dim >> b.psd_dim >> b.tag >> b.label;
    b.cone = cone_from_string(cone);
    cp.blocks.push_back(b);
  }
  int m = 0;
  expect(in, "rows");
  in >> m;
  expect(in, "F");
  in >> nnz;
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < nnz; ++k) {
    int r = 0;
    int c = 0;
    double v = 0.0;
    in >> r >> c >> v;
    trips.emplace_back(r, c, v);
  }
  cp.f.resize(m, cp.n);
  cp.f.setFromTriplets(trips.begin(), trips.end());
  expect(in, "g");
  cp.g.resize(m);
  for (int i = 0; i < m; ++i) in >> cp.g[i];
  expect(in, "end");
  if (!in) throw std::runtime_error("program dump: truncated input");
  return cp;
}

void save_program(const CanonicalProgram& program, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_program(out, program);
}

CanonicalProgram load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_program(in);
}

}  // namespace secisac::conic
