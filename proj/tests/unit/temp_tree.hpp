#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

// Scratch directory removed on scope exit.
struct TempTree {
  std::filesystem::path root;

  explicit TempTree(const std::string& name) {
    root = std::filesystem::temp_directory_path() / ("qai-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(root);
    std::filesystem::create_directories(root);
  }
  ~TempTree() {
    std::error_code ec;
    std::filesystem::remove_all(root, ec);
  }
  TempTree(const TempTree&) = delete;
  TempTree& operator=(const TempTree&) = delete;

  void write(const std::string& rel, const std::string& text) const {
    std::filesystem::create_directories((root / rel).parent_path());
    std::ofstream(root / rel, std::ios::binary) << text;
  }
};
