#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "rgs/types.hpp"

namespace rgs {

struct PlyWriteStats {
    int clamped_opacities = 0; // opacities pushed into (1e-6, 1 - 1e-6) before the logit
};

// Standard 3DGS binary little-endian PLY: per-vertex x,y,z, nx,ny,nz,
// f_dc_0..2, f_rest_0..44, opacity, scale_0..2, rot_0..3 (all float32).
// Stored values are pre-activation; the reader applies sigmoid / exp /
// quaternion normalization and deinterleaves f_rest from channel-major to
// coefficient-group-major. Normals are read and discarded. Malformed input
// raises FormatError, never a crash.
std::vector<GaussianPrimitive> read_3dgs_ply(std::istream& in);
std::vector<GaussianPrimitive> read_3dgs_ply(const std::filesystem::path& path);

// Inverse activations (logit, log); primitives below band 3 are written with
// zero-filled f_rest. read(write(x)) is identity within one float32 ULP per
// field.
PlyWriteStats write_3dgs_ply(const std::vector<GaussianPrimitive>& primitives, std::ostream& out);
PlyWriteStats write_3dgs_ply(const std::vector<GaussianPrimitive>& primitives,
                             const std::filesystem::path& path);

// The exact value transformation a PLY write-then-read round trip applies
// (activation inverses in double precision plus quaternion normalization).
// Pipeline stages use it so that on-disk checkpoints and in-memory chaining
// produce bit-identical scenes.
void canonicalize_like_storage(std::vector<GaussianPrimitive>& primitives);

} // namespace rgs
