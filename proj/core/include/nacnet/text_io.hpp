#pragma once

#include <istream>
#include <string>
#include <vector>

namespace nacnet {

/// Shortest decimal form that parses back to the identical double.
std::string formatDouble(double v);

/// Bit-exact hexfloat form, used by checkpoints.
std::string formatDoubleHex(double v);

/// Parses a double (decimal or hexfloat). Throws ParseError with `what`
/// in the message on failure.
double parseDouble(const std::string& tok, const std::string& what);

long parseLong(const std::string& tok, const std::string& what);

/// Splits on single spaces; empty tokens are reported as errors upstream.
std::vector<std::string> splitWs(const std::string& line);

/// Line reader that skips '#' comment lines and tracks the physical line
/// number for error messages.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// Next non-comment line; false at EOF.
    bool next(std::string& line);
    int lineNumber() const { return line_number_; }

private:
    std::istream& in_;
    int line_number_ = 0;
};

/// Writes `content` to `path` atomically: temp file in the same
/// directory, then rename. Throws DataError on I/O failure.
void atomicWriteFile(const std::string& path, const std::string& content);

std::string readFile(const std::string& path);

} // namespace nacnet
