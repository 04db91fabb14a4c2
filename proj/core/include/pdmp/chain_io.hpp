#pragma once

#include "pdmp/simulate.hpp"

#include <filesystem>
#include <iosfwd>

namespace pdmp {

//! Columnar text serialization of a JumpChain.
//!
//!   # pdmp-chain v1
//!   # model: <ModelSpec descriptor>
//!   # seed: <u64>            (omitted when unknown)
//!   # transitions: <n>
//!   # columns: z [t]
//!   Z_0 [0]
//!   Z_1 [T_1]
//!   ...
//!
//! Values use 17 significant digits so the decimal round trip is bit-exact.
void write_chain(std::ostream& out, const JumpChain& chain);
JumpChain read_chain(std::istream& in);

void save_chain(const std::filesystem::path& path, const JumpChain& chain);
JumpChain load_chain(const std::filesystem::path& path);

} // namespace pdmp
