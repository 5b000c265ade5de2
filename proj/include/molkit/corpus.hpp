#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "molkit/errors.hpp"
#include "molkit/finlat.hpp"

namespace molkit {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
}

// Built-in lattice specs: mo:N, bool:N, o6, prod:SPEC,SPEC,
// interval:TOP:BOTTOM:SPEC, or a file path.
inline FiniteOrtholattice lattice_from_spec(const std::string& spec) {
  if (spec.rfind("mo:", 0) == 0) return mo(std::stoi(spec.substr(3)));
  if (spec.rfind("bool:", 0) == 0) return boolean_algebra(std::stoi(spec.substr(5)));
  if (spec == "o6") return o6();
  if (spec.rfind("prod:", 0) == 0) {
    std::string rest = spec.substr(5);
    std::size_t comma = rest.find(',');
    if (comma == std::string::npos) throw UnknownSpec("prod needs two comma-separated specs");
    return product(lattice_from_spec(rest.substr(0, comma)),
                   lattice_from_spec(rest.substr(comma + 1)));
  }
  if (spec.rfind("interval:", 0) == 0) {
    std::string rest = spec.substr(9);
    std::size_t c1 = rest.find(':');
    std::size_t c2 = rest.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw UnknownSpec("interval:TOP:BOTTOM:SPEC");
    FiniteOrtholattice base = lattice_from_spec(rest.substr(c2 + 1));
    return interval_subalgebra(base, base.index_of(rest.substr(0, c1)),
                               base.index_of(rest.substr(c1 + 1, c2 - c1 - 1)));
  }
  if (spec.find(':') == std::string::npos && spec.find('.') != std::string::npos)
    return lattice_from_text(read_file(spec));
  // fall through: try as a file, else report the spec as unknown
  std::ifstream probe(spec);
  if (probe) return lattice_from_text(read_file(spec));
  throw UnknownSpec("unknown lattice spec '" + spec + "'");
}

}  // namespace molkit
