/*
 * Copyright 2026 The coalition-bench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COALITION_RATIONAL_HPP
#define COALITION_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace coalition {

__extension__ typedef __int128 int128_t;

/// Exact fraction over 64-bit integers, always stored in lowest terms with a
/// positive denominator. Intermediate products use 128-bit arithmetic; a result
/// that does not fit back into 64 bits throws std::overflow_error.
class Rational
{
public:
	constexpr Rational() noexcept = default;
	constexpr Rational(std::int64_t value) noexcept : num_(value) {} // NOLINT(implicit)

	Rational(std::int64_t num, std::int64_t den)
	{
		if (den == 0)
			throw std::domain_error("Rational: zero denominator");
		assign(static_cast<int128_t>(num), static_cast<int128_t>(den));
	}

	constexpr std::int64_t num() const noexcept { return num_; }
	constexpr std::int64_t den() const noexcept { return den_; }

	double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

	bool is_integer() const noexcept { return den_ == 1; }

	/// Largest integer not greater than the value.
	std::int64_t floor() const noexcept
	{
		std::int64_t q = num_ / den_;
		if (num_ % den_ != 0 && num_ < 0)
			--q;
		return q;
	}

	/// Smallest integer not less than the value.
	std::int64_t ceil() const noexcept
	{
		std::int64_t q = num_ / den_;
		if (num_ % den_ != 0 && num_ > 0)
			++q;
		return q;
	}

	std::string to_string() const
	{
		if (den_ == 1)
			return std::to_string(num_);
		return std::to_string(num_) + "/" + std::to_string(den_);
	}

	/// Parses "p", "p/q" or a finite decimal such as "12.5".
	static Rational parse(const std::string& text)
	{
		if (text.empty())
			throw std::invalid_argument("Rational: empty text");
		if (const auto slash = text.find('/'); slash != std::string::npos)
			return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
		if (const auto dot = text.find('.'); dot != std::string::npos)
		{
			const std::string whole = text.substr(0, dot);
			const std::string frac = text.substr(dot + 1);
			if (frac.size() > 15)
				throw std::invalid_argument("Rational: too many decimals in '" + text + "'");
			std::int64_t scale = 1;
			for (std::size_t i = 0; i < frac.size(); ++i)
				scale *= 10;
			const bool negative = !whole.empty() && whole.front() == '-';
			const std::int64_t w = (whole.empty() || whole == "-") ? 0 : std::stoll(whole);
			const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
			const Rational magnitude = Rational(negative ? -w : w) + Rational(f, scale);
			return negative ? -magnitude : magnitude;
		}
		std::size_t used = 0;
		const std::int64_t value = std::stoll(text, &used);
		if (used != text.size())
			throw std::invalid_argument("Rational: cannot parse '" + text + "'");
		return Rational(value);
	}

	friend Rational operator+(const Rational& a, const Rational& b)
	{
		Rational r;
		r.assign(static_cast<int128_t>(a.num_) * b.den_ + static_cast<int128_t>(b.num_) * a.den_,
		         static_cast<int128_t>(a.den_) * b.den_);
		return r;
	}

	friend Rational operator-(const Rational& a, const Rational& b)
	{
		Rational r;
		r.assign(static_cast<int128_t>(a.num_) * b.den_ - static_cast<int128_t>(b.num_) * a.den_,
		         static_cast<int128_t>(a.den_) * b.den_);
		return r;
	}

	friend Rational operator*(const Rational& a, const Rational& b)
	{
		Rational r;
		r.assign(static_cast<int128_t>(a.num_) * b.num_, static_cast<int128_t>(a.den_) * b.den_);
		return r;
	}

	friend Rational operator/(const Rational& a, const Rational& b)
	{
		if (b.num_ == 0)
			throw std::domain_error("Rational: division by zero");
		Rational r;
		r.assign(static_cast<int128_t>(a.num_) * b.den_, static_cast<int128_t>(a.den_) * b.num_);
		return r;
	}

	Rational operator-() const
	{
		Rational r;
		r.assign(-static_cast<int128_t>(num_), den_);
		return r;
	}

	Rational& operator+=(const Rational& o) { return *this = *this + o; }
	Rational& operator-=(const Rational& o) { return *this = *this - o; }
	Rational& operator*=(const Rational& o) { return *this = *this * o; }
	Rational& operator/=(const Rational& o) { return *this = *this / o; }

	friend bool operator==(const Rational& a, const Rational& b) noexcept
	{
		return a.num_ == b.num_ && a.den_ == b.den_;
	}

	friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept
	{
		const int128_t lhs = static_cast<int128_t>(a.num_) * b.den_;
		const int128_t rhs = static_cast<int128_t>(b.num_) * a.den_;
		if (lhs < rhs)
			return std::strong_ordering::less;
		if (lhs > rhs)
			return std::strong_ordering::greater;
		return std::strong_ordering::equal;
	}

	friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
	static int128_t gcd128(int128_t a, int128_t b) noexcept
	{
		if (a < 0)
			a = -a;
		if (b < 0)
			b = -b;
		while (b != 0)
		{
			const int128_t t = a % b;
			a = b;
			b = t;
		}
		return a;
	}

	void assign(int128_t num, int128_t den)
	{
		if (den < 0)
		{
			num = -num;
			den = -den;
		}
		const int128_t g = gcd128(num, den);
		if (g > 1)
		{
			num /= g;
			den /= g;
		}
		constexpr int128_t lo = INT64_MIN;
		constexpr int128_t hi = INT64_MAX;
		if (num < lo || num > hi || den > hi)
			throw std::overflow_error("Rational: 64-bit overflow");
		num_ = static_cast<std::int64_t>(num);
		den_ = static_cast<std::int64_t>(den);
	}

	std::int64_t num_ = 0;
	std::int64_t den_ = 1;
};

} // namespace coalition

#endif // COALITION_RATIONAL_HPP
