#ifndef BIFI_CSV_HPP
#define BIFI_CSV_HPP

#include <sstream>
#include <string>
#include <vector>

namespace bifi {

/// Shortest round-trip decimal form of a double; stable across reruns.
std::string format_double(double value);

std::vector<std::string> split_csv_line(const std::string& line);

std::string join_csv(const std::vector<std::string>& fields);

}  // namespace bifi

#endif
