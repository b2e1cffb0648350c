#pragma once

#include <string>

#include "ineqlab/grid.hpp"

namespace ineqlab {

enum class GridFormat { text, binary };

// PGF1: "PGF1 d n lambda" then n^d values, row-major.
// PGB1: 24-byte header (magic, d, n as u32 LE, 4 pad bytes, lambda as f64 LE)
// then n^d f64 LE values.
void save_grid(const GridFunction& u, const std::string& path, GridFormat fmt = GridFormat::text);
GridFunction load_grid(const std::string& path);

std::string to_pgf1(const GridFunction& u);
GridFunction parse_pgf1(const std::string& text);
std::string to_pgb1(const GridFunction& u);
GridFunction parse_pgb1(const std::string& bytes);

}  // namespace ineqlab
