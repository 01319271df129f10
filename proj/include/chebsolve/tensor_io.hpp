#pragma once

#include <iosfwd>
#include <string>

#include "chebsolve/chebpoly.hpp"

namespace chebsolve {

/// Coefficient tensors travel as JSON documents with three fields: "dims"
/// (dimension count), "degrees" (per-dimension degree list) and "coeffs"
/// (flat row-major list, last dimension fastest). Values use shortest
/// round-trip decimals, so write followed by read is bit-exact.

ChebPoly read_tensor(std::istream& in);
ChebPoly read_tensor_file(const std::string& path);

void write_tensor(std::ostream& out, const ChebPoly& p);
void write_tensor_file(const std::string& path, const ChebPoly& p);

}  // namespace chebsolve
