#pragma once

#include <string>

#include "core/grid.hpp"

namespace vtf {

/// "VTF1 nx ny lx ly bc" header (node counts per axis), newline, then
/// little-endian f64 (re, im) pairs in row-major order.
void write_snapshot(const ComplexField& u, const std::string& path);
ComplexField read_snapshot(const std::string& path);

}  // namespace vtf
