#pragma once

// Binary container for grid functions, lattice sets and materialized kernels.
//
//   "SLAB" | version u8 | payload u8 (0 f64, 1 bits) | kernel tag u8 | reserved u8
//   | d u32 | lower i64 x d | extents u64 x d | payload
//
// Everything little-endian. Bits are packed 64 per word in box storage order.
// Tiny fixtures may instead be JSON: {"lower": [...], "extents": [...]} plus
// either "values" (row-major) or "points" (list of coordinate lists).

#include <string>

#include "simplexlab/fourier.hpp"
#include "simplexlab/grid.hpp"

namespace simplexlab {

inline constexpr std::uint8_t kSlabVersion = 1;

enum class SlabPayload : std::uint8_t { f64 = 0, bits = 1 };

struct SlabData {
  SlabPayload payload = SlabPayload::f64;
  KernelTag tag = KernelTag::none;
  GridFunction function;  // payload f64
  LatticeSet set;         // payload bits
};

std::string encode_slab(const GridFunction& f, KernelTag tag = KernelTag::none);
std::string encode_slab(const LatticeSet& a);
/// Throws IoError on malformed input.
SlabData decode_slab(const std::string& bytes);

void write_slab(const std::string& path, const GridFunction& f, KernelTag tag = KernelTag::none);
void write_slab(const std::string& path, const LatticeSet& a);
/// The kernel materialized on its support box, tag in the header.
void write_kernel(const std::string& path, const Kernel& k);
SlabData read_slab(const std::string& path);

/// .json files go through the JSON reader, anything else through SLAB. A set
/// read as a function is its indicator; a function read as a set is its support.
GridFunction read_function(const std::string& path);
LatticeSet read_set(const std::string& path);

SlabData parse_json_fixture(const std::string& text);

}  // namespace simplexlab
