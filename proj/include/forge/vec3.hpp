#pragma once

#include <cmath>

namespace forge {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double c) { x *= c; y *= c; z *= c; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(Vec3 a, double c) { return a *= c; }
inline Vec3 operator*(double c, Vec3 a) { return a *= c; }
inline Vec3 operator/(Vec3 a, double c) { return a *= (1.0 / c); }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

inline double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(cross(a, b), c); }

}  // namespace forge
