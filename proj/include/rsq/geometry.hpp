#ifndef RSQ_GEOMETRY_HPP
#define RSQ_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rsq {

using NodeId = std::uint32_t;
using QueryId = std::uint32_t;

/// Raised when a caller breaks an operation's precondition.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Raised for malformed scenarios and config files, before any event fires.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct Area {
    double width = 0.0;
    double height = 0.0;

    bool contains(Vec2 p) const {
        return p.x >= 0.0 && p.y >= 0.0 && p.x <= width && p.y <= height;
    }
    double size() const { return width * height; }
};

}  // namespace rsq

#endif  // RSQ_GEOMETRY_HPP
