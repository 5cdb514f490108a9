#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ideaminer::io {

std::string read_file(const std::filesystem::path& path);

// Writes through a sibling temp file and renames it over the target, so a
// reader never observes a partially written artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);

// "%.6g" formatting shared by every export and rendered table.
std::string format_number(double value);

// Exclusive lock on a directory: fails if <dir>/.lock already exists.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path lock_path_;
};

}  // namespace ideaminer::io
