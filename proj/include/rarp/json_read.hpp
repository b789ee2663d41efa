#pragma once

#include <string>

#include "json.hpp"

namespace rarp::json_read {

// Parses text, converting nlohmann parse errors into ParseError with a
// line:column location.
nlohmann::json parse(const std::string& text, const std::string& source);

const nlohmann::json& field(const nlohmann::json& obj, const char* name, const std::string& where);
double number(const nlohmann::json& obj, const char* name, const std::string& where);
long long integer(const nlohmann::json& obj, const char* name, const std::string& where);
bool boolean(const nlohmann::json& obj, const char* name, const std::string& where);
std::string text(const nlohmann::json& obj, const char* name, const std::string& where);
const nlohmann::json& array(const nlohmann::json& obj, const char* name, const std::string& where);
const nlohmann::json& object(const nlohmann::json& obj, const char* name, const std::string& where);

}  // namespace rarp::json_read
