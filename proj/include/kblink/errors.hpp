#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kblink {

// Base for every error the library raises. Loaders throw; the linker itself
// never does once its inputs are validated.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string& what)
      : Error("malformed record at line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateEntityId : public Error {
 public:
  explicit DuplicateEntityId(const std::string& id) : Error("duplicate entity id: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class UnknownEntity : public Error {
 public:
  explicit UnknownEntity(const std::string& id) : Error("unknown entity: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class MalformedDocument : public Error {
 public:
  MalformedDocument(std::size_t line, const std::string& what)
      : Error("malformed document at line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class OverlappingMentions : public Error {
 public:
  explicit OverlappingMentions(const std::string& doc_id)
      : Error("overlapping mentions in document " + doc_id), doc_id_(doc_id) {}
  const std::string& doc_id() const { return doc_id_; }

 private:
  std::string doc_id_;
};

class SpanMismatch : public Error {
 public:
  SpanMismatch(const std::string& doc_id, std::size_t mention_index)
      : Error("mention " + std::to_string(mention_index) + " of document " + doc_id +
              " does not match its text span"),
        doc_id_(doc_id),
        mention_index_(mention_index) {}
  const std::string& doc_id() const { return doc_id_; }
  std::size_t mention_index() const { return mention_index_; }

 private:
  std::string doc_id_;
  std::size_t mention_index_;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Index cache could not be read: bad magic, version mismatch or truncation.
class IndexFormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace kblink
