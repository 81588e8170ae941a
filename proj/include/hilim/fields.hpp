#ifndef HILIM_FIELDS_HPP
#define HILIM_FIELDS_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "hilim/errors.hpp"

namespace hilim {

/// Arbitrary-precision rational scalar, always kept in canonical (reduced) form.
using Rational = boost::multiprecision::mpq_rational;

/// Element of a prime field F_p.
///
/// The modulus travels with the value so matrices over different primes can
/// coexist. A scalar constructed from a bare integer (as Eigen does with
/// Scalar(0), Scalar(1)) has no modulus yet; it picks one up from the first
/// arithmetic partner that carries one. Residues are canonical in [0, p).
class Fp {
public:
    Fp() = default;
    Fp(long long n) : v_(n) {}
    Fp(long long n, std::uint32_t p) : v_(reduce(n, p)), p_(p) {}

    long long value() const { return v_; }
    std::uint32_t modulus() const { return p_; }

    friend Fp operator+(const Fp& a, const Fp& b) {
        std::uint32_t p = join(a, b);
        return p ? Fp(a.v_ + b.v_, p) : Fp(a.v_ + b.v_);
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        std::uint32_t p = join(a, b);
        return p ? Fp(a.v_ - b.v_, p) : Fp(a.v_ - b.v_);
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        std::uint32_t p = join(a, b);
        if (!p) return Fp(a.v_ * b.v_);
        return Fp((reduce(a.v_, p) * reduce(b.v_, p)) % p, p);
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }
    Fp operator-() const { return p_ ? Fp(-v_, p_) : Fp(-v_); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    Fp& operator/=(const Fp& o) { return *this = *this / o; }

    friend bool operator==(const Fp& a, const Fp& b) {
        std::uint32_t p = join(a, b);
        if (!p) return a.v_ == b.v_;
        return reduce(a.v_, p) == reduce(b.v_, p);
    }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

    /// Multiplicative inverse by the extended Euclidean algorithm. A
    /// modulus-free +-1 (an Eigen-made literal) is its own inverse.
    Fp inverse() const {
        if (p_ == 0 && (v_ == 1 || v_ == -1)) return *this;
        if (p_ == 0 || v_ % p_ == 0)
            throw InternalError(InternalError::Code::BoundaryNotZero,
                                "Fp::inverse: zero or modulus-free scalar");
        long long t = 0, new_t = 1;
        long long r = p_, new_r = v_;
        while (new_r != 0) {
            long long q = r / new_r;
            t = std::exchange(new_t, t - q * new_t);
            r = std::exchange(new_r, r - q * new_r);
        }
        return Fp(t, p_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Fp& x) {
        return os << (x.p_ ? reduce(x.v_, x.p_) : x.v_);
    }

private:
    static long long reduce(long long n, std::uint32_t p) {
        long long r = n % static_cast<long long>(p);
        return r < 0 ? r + p : r;
    }
    static std::uint32_t join(const Fp& a, const Fp& b) {
        if (a.p_ && b.p_ && a.p_ != b.p_)
            throw InternalError(InternalError::Code::BoundaryNotZero,
                                "Fp: mixed moduli");
        return a.p_ ? a.p_ : b.p_;
    }

    long long v_ = 0;
    std::uint32_t p_ = 0;
};

/// Runtime choice of coefficient field.
struct FieldSpec {
    enum class Kind { Rationals, PrimeField };
    Kind kind = Kind::Rationals;
    std::uint32_t p = 0;

    static FieldSpec rationals() { return {Kind::Rationals, 0}; }

    static FieldSpec prime_field(std::uint32_t p) {
        if (p < 2 || p >= (1u << 31) || !is_prime(p))
            throw InputError(InputError::Code::NotPrime,
                             "not a prime below 2^31: " + std::to_string(p));
        return {Kind::PrimeField, p};
    }

    /// Parses "Q" or "Fp:P".
    static FieldSpec parse(const std::string& s) {
        if (s == "Q") return rationals();
        if (s.rfind("Fp:", 0) == 0) {
            try {
                return prime_field(static_cast<std::uint32_t>(std::stoul(s.substr(3))));
            } catch (const std::logic_error&) {
                throw InputError(InputError::Code::ParseError, "bad field spec: " + s);
            }
        }
        throw InputError(InputError::Code::ParseError, "bad field spec: " + s);
    }

    std::string name() const {
        return kind == Kind::Rationals ? "Q" : "Fp:" + std::to_string(p);
    }

    bool operator==(const FieldSpec&) const = default;

    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }
};

/// Scalar-type-level hooks used by the generic linear algebra and I/O.
template <class Scalar>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
    static Rational from_integer(const FieldSpec&, long long n) { return Rational(n); }
    static Rational from_string(const FieldSpec&, const std::string& s) {
        try {
            // The raw string constructor does not reduce the fraction; dividing
            // canonical integers does.
            Rational r(s);
            return Rational(numerator(r)) / Rational(denominator(r));
        } catch (const std::exception&) {
            throw InputError(InputError::Code::ParseError, "bad rational: " + s);
        }
    }
    static std::string to_string(const Rational& x) { return x.str(); }
    static Rational inverse(const Rational& x) { return 1 / x; }
    static bool matches(const FieldSpec& f) { return f.kind == FieldSpec::Kind::Rationals; }
};

template <>
struct FieldTraits<Fp> {
    static Fp from_integer(const FieldSpec& f, long long n) { return Fp(n, f.p); }
    static Fp from_string(const FieldSpec& f, const std::string& s) {
        try {
            return Fp(std::stoll(s), f.p);
        } catch (const std::logic_error&) {
            throw InputError(InputError::Code::ParseError, "bad F_p scalar: " + s);
        }
    }
    static std::string to_string(const Fp& x) { return std::to_string(x.value()); }
    static Fp inverse(const Fp& x) { return x.inverse(); }
    static bool matches(const FieldSpec& f) { return f.kind == FieldSpec::Kind::PrimeField; }
};

/// Invokes fn with the scalar type selected by the runtime field spec.
template <class Fn>
decltype(auto) dispatch_field(const FieldSpec& field, Fn&& fn) {
    if (field.kind == FieldSpec::Kind::Rationals)
        return fn.template operator()<Rational>();
    return fn.template operator()<Fp>();
}

} // namespace hilim

namespace Eigen {

template <>
struct NumTraits<hilim::Fp> {
    using Real = hilim::Fp;
    using NonInteger = hilim::Fp;
    using Nested = hilim::Fp;
    using Literal = long long;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 3,
        MulCost = 6,
    };
    static int digits10() { return 9; }
    static hilim::Fp epsilon() { return hilim::Fp(0); }
    static hilim::Fp dummy_precision() { return hilim::Fp(0); }
};

} // namespace Eigen

#endif
