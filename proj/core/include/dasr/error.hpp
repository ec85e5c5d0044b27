#pragma once

#include <stdexcept>
#include <string>

namespace dasr {

// Root of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (bad shape, bad size, bad config value).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Filesystem failure: missing file, unreadable or unwritable path.
class IoError : public Error {
 public:
  using Error::Error;
};

// A file was read but its contents are not what we expect.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Stored checksum does not match the payload.
class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Training diverged or hit an unrecoverable numeric state.
class TrainingError : public Error {
 public:
  using Error::Error;
};

namespace detail {
[[noreturn]] inline void throw_invalid(const std::string& what) { throw InvalidArgument(what); }
}  // namespace detail

#define DASR_REQUIRE(cond, msg)                         \
  do {                                                  \
    if (!(cond)) ::dasr::detail::throw_invalid(msg);    \
  } while (0)

}  // namespace dasr
