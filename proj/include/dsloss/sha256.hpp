#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace dsloss {

// Incremental SHA-256 (FIPS 180-4). Used for the artifact manifest so
// reruns can be compared for byte identity without external tooling.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  // Finalizes and returns the 32-byte digest; the object must not be
  // updated afterwards.
  std::array<std::uint8_t, 32> digest();

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
};

// Lowercase hex digest of a byte string.
std::string sha256_hex(std::string_view bytes);

// Lowercase hex digest of a file's contents; throws DataError when the
// file cannot be read.
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace dsloss
