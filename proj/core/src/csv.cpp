#include "expeng/csv.hpp"

#include <charconv>
#include <cstring>

#include "expeng/errors.hpp"

namespace expeng {

namespace {
constexpr std::size_t kReadBlock = 1u << 20;
}

CsvReader::CsvReader(const std::string& path, char delimiter)
    : delimiter_(delimiter) {
  file_ = std::fopen(path.c_str(), "rb");
  if (!file_) {
    throw SchemaError("cannot open file: " + path);
  }
  std::vector<std::string_view> fields;
  if (!fill_record()) {
    throw SchemaError("empty file: " + path);
  }
  split_fields(fields);
  header_.reserve(fields.size());
  for (auto f : fields) header_.emplace_back(f);
  record_number_ = 0;
}

CsvReader::~CsvReader() {
  if (file_) std::fclose(file_);
}

// Scans buffer_ from pos_ for the next complete record (newline outside
// quotes), refilling from the file as needed. Sets rec_begin_/rec_end_ to the
// record's byte range (newline excluded) and advances pos_ past it.
bool CsvReader::fill_record() {
  // Drop consumed bytes once they dominate the buffer.
  if (pos_ > 0 && pos_ * 2 > buffer_.size()) {
    buffer_.erase(0, pos_);
    pos_ = 0;
  }
  std::size_t scan = pos_;
  bool in_quotes = false;
  while (true) {
    while (scan < buffer_.size()) {
      const char c = buffer_[scan];
      if (in_quotes) {
        if (c == '"') {
          if (scan + 1 < buffer_.size()) {
            if (buffer_[scan + 1] == '"') {
              scan += 2;
              continue;
            }
            in_quotes = false;
          } else if (eof_) {
            in_quotes = false;
          } else {
            break;  // need more bytes to disambiguate ""
          }
        }
        ++scan;
      } else if (c == '"') {
        in_quotes = true;
        ++scan;
      } else if (c == '\n') {
        rec_begin_ = pos_;
        rec_end_ = scan;
        if (rec_end_ > rec_begin_ && buffer_[rec_end_ - 1] == '\r') --rec_end_;
        pos_ = scan + 1;
        return true;
      } else {
        ++scan;
      }
    }
    if (eof_) {
      if (pos_ >= buffer_.size()) return false;
      rec_begin_ = pos_;
      rec_end_ = buffer_.size();
      if (rec_end_ > rec_begin_ && buffer_[rec_end_ - 1] == '\r') --rec_end_;
      pos_ = buffer_.size();
      return rec_end_ > rec_begin_;
    }
    const std::size_t old = buffer_.size();
    buffer_.resize(old + kReadBlock);
    const std::size_t got = std::fread(buffer_.data() + old, 1, kReadBlock, file_);
    buffer_.resize(old + got);
    if (got == 0) eof_ = true;
  }
}

void CsvReader::split_fields(std::vector<std::string_view>& fields) {
  fields.clear();
  scratch_.clear();
  const char* data = buffer_.data();
  std::size_t i = rec_begin_;
  // First pass records (offset, length, in_scratch) to keep scratch_ stable.
  struct Span {
    std::size_t off, len;
    bool in_scratch;
  };
  static thread_local std::vector<Span> spans;
  spans.clear();
  while (true) {
    if (i < rec_end_ && data[i] == '"') {
      // Quoted field: unescape into scratch_.
      const std::size_t out_off = scratch_.size();
      ++i;
      while (i < rec_end_) {
        if (data[i] == '"') {
          if (i + 1 < rec_end_ && data[i + 1] == '"') {
            scratch_.push_back('"');
            i += 2;
          } else {
            ++i;
            break;
          }
        } else {
          scratch_.push_back(data[i]);
          ++i;
        }
      }
      spans.push_back({out_off, scratch_.size() - out_off, true});
      if (i < rec_end_ && data[i] == delimiter_) {
        ++i;
        if (i == rec_end_) {
          spans.push_back({0, 0, true});
          break;
        }
        continue;
      }
      break;
    }
    const std::size_t start = i;
    while (i < rec_end_ && data[i] != delimiter_) ++i;
    spans.push_back({start, i - start, false});
    if (i < rec_end_) {
      ++i;  // skip delimiter
      if (i == rec_end_) {
        spans.push_back({0, 0, true});
        break;
      }
    } else {
      break;
    }
  }
  fields.reserve(spans.size());
  for (const auto& s : spans) {
    const char* base = s.in_scratch ? scratch_.data() : buffer_.data();
    fields.emplace_back(base + s.off, s.len);
  }
}

bool CsvReader::next_record(std::vector<std::string_view>& fields) {
  if (!fill_record()) return false;
  ++record_number_;
  split_fields(fields);
  return true;
}

CsvWriter::CsvWriter(const std::string& path, char delimiter)
    : delimiter_(delimiter) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) {
    throw Error("cannot open file for writing: " + path);
  }
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::close() {
  if (file_) {
    std::fclose(file_);
    file_ = nullptr;
  }
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  line_.clear();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line_.push_back(delimiter_);
    const std::string& f = fields[i];
    const bool needs_quotes =
        f.find_first_of("\"\n\r") != std::string::npos ||
        f.find(delimiter_) != std::string::npos;
    if (needs_quotes) {
      line_.push_back('"');
      for (char c : f) {
        if (c == '"') line_.push_back('"');
        line_.push_back(c);
      }
      line_.push_back('"');
    } else {
      line_.append(f);
    }
  }
  line_.push_back('\n');
  std::fwrite(line_.data(), 1, line_.size(), file_);
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace expeng
