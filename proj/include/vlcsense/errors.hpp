#pragma once

#include <stdexcept>
#include <string>

namespace vlcs {

// Precondition violation on an operation input.
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Feature vector collapsed to zero after mean removal (all-equal CSI magnitudes).
class degenerate_feature : public std::runtime_error {
 public:
  explicit degenerate_feature(const std::string& what) : std::runtime_error(what) {}
};

// Equalizer hit a zero channel estimate; the message names the subcarrier.
class equalization_singularity : public std::runtime_error {
 public:
  explicit equalization_singularity(const std::string& what) : std::runtime_error(what) {}
};

// File or parse problem; the CLI reports these with exit code 2.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vlcs
