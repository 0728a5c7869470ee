#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "gcd/runtime.hpp"

namespace gcd {

inline constexpr std::uint32_t kArtifactVersion = 1;

/// Layout: "GCDA", u32 version, 32-byte SHA-256 of everything after the
/// hash, u32 section count, per section (u32 id, u64 offset, u64 length),
/// then payloads. Integers are little-endian.
std::string serialize_artifact(const CompiledArtifact& a);

/// Throws ArtifactError on bad magic, version mismatch, hash mismatch,
/// truncation or inconsistent embedded hashes.
CompiledArtifact deserialize_artifact(std::string_view bytes);

void write_artifact_file(const std::string& path, const CompiledArtifact& a);
CompiledArtifact read_artifact_file(const std::string& path);

}  // namespace gcd
