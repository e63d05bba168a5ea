#pragma once

#include "sttd/image.hpp"
#include "sttd/metrics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sttd {

/// Raw samples of a grayscale file before normalization.
struct RawImage {
  Eigen::Matrix<std::uint16_t, Eigen::Dynamic, Eigen::Dynamic> pixels;
  int maxval = 255;
};

// Every reader throws IoError on a missing file or malformed content.

/// Binary PGM (P5), maxval up to 65535, two-byte samples big-endian.
[[nodiscard]] RawImage read_pgm(const std::filesystem::path& path);
/// Grayscale PNG, 1 to 16 bits. Colour images are rejected.
[[nodiscard]] RawImage read_png(const std::filesystem::path& path);
/// Dispatches on the extension (.pgm or .png, any case).
[[nodiscard]] RawImage read_raw(const std::filesystem::path& path);
/// Reads and divides by maxval, giving intensities in [0, 1].
[[nodiscard]] Image read_image(const std::filesystem::path& path, int* bit_depth = nullptr);

void write_pgm(const std::filesystem::path& path, const RawImage& img);
void write_png(const std::filesystem::path& path, const RawImage& img);

/// Clamps to [0, 1] and quantizes to `bits` (8 or 16) with round-to-nearest.
[[nodiscard]] RawImage quantize(const Image& img, int bits);
/// Writes 255 for set pixels, 0 elsewhere.
void write_mask_pgm(const std::filesystem::path& path, const Mask& mask);
[[nodiscard]] Mask read_mask(const std::filesystem::path& path);

/// Image files (.pgm / .png) directly inside `dir`, sorted by file name.
[[nodiscard]] std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);
/// Loads every frame of `dir`. Throws IoError when no frame is found or
/// frames differ in size.
[[nodiscard]] FrameSequence read_sequence(const std::filesystem::path& dir);

/// Truth CSV with header frame,row,col,a,b. Frames without targets have no
/// rows; `frames` fixes the sequence length (0 = highest frame index + 1).
[[nodiscard]] TargetTruth read_truth_csv(const std::filesystem::path& path, std::size_t frames = 0);
[[nodiscard]] std::string truth_to_csv(const TargetTruth& truth);

/// Writes text exactly as given (binary mode, so LF stays LF).
void write_text(const std::filesystem::path& path, const std::string& text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

}  // namespace sttd
