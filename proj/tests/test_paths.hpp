#pragma once

#include <string>

inline std::string fixture(const std::string& name) { return std::string(SKILLGAP_FIXTURES) + "/" + name; }
inline std::string data_file(const std::string& name) { return std::string(SKILLGAP_DATA) + "/" + name; }
