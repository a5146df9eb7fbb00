#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wtbc {

/// 1-based position in the token stream (the root bytemap). 0 means "before the first".
using Position = std::uint64_t;
/// 1-based document identifier.
using DocId = std::uint64_t;
/// Vocabulary rank; rank 0 is the document-end sentinel.
using WordId = std::uint32_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input documents or configuration.
class IngestError : public Error {
public:
    using Error::Error;
};

/// Argument past the end of a sequence.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// select() asked for an occurrence that does not exist.
class NotFound : public Error {
public:
    using Error::Error;
};

class UnknownWord : public Error {
public:
    explicit UnknownWord(const std::string& word) : Error("unknown word: " + word) {}
};

/// Byte stream or index file that cannot be decoded.
class CorruptData : public Error {
public:
    using Error::Error;
};

/// Vocabulary too large for the codeword length cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

}  // namespace wtbc
