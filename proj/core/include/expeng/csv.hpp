#pragma once

#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace expeng {

/// Streaming RFC 4180 reader: quoted fields, doubled-quote escapes, embedded
/// newlines and CRLF line endings. Field views returned by next_record stay
/// valid until the next call.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path, char delimiter = ',');
  ~CsvReader();
  CsvReader(const CsvReader&) = delete;
  CsvReader& operator=(const CsvReader&) = delete;

  const std::vector<std::string>& header() const { return header_; }
  /// Reads the next data record. Returns false at end of file.
  bool next_record(std::vector<std::string_view>& fields);
  /// 1-based index of the record returned by the last next_record call
  /// (the header row is not counted).
  std::size_t record_number() const { return record_number_; }

 private:
  bool fill_record();
  void split_fields(std::vector<std::string_view>& fields);

  std::FILE* file_ = nullptr;
  char delimiter_;
  std::string buffer_;       // pending raw bytes
  std::size_t pos_ = 0;      // consumed prefix of buffer_
  std::size_t rec_begin_ = 0, rec_end_ = 0;
  bool eof_ = false;
  std::string scratch_;      // unescaped quoted-field storage
  std::vector<std::string> header_;
  std::size_t record_number_ = 0;
};

/// Minimal CSV writer; quotes fields only when needed.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path, char delimiter = ',');
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void write_row(const std::vector<std::string>& fields);
  void close();

 private:
  std::FILE* file_ = nullptr;
  char delimiter_;
  std::string line_;
};

/// Shortest round-trip formatting for doubles (std::to_chars).
std::string format_double(double value);

}  // namespace expeng
