#pragma once

#include <cmath>

namespace wastefactor {

/// Power ratio in dB -> linear.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Linear power ratio -> dB. Throws std::domain_error for non-positive input.
double linear_to_db(double linear);

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts);

/**
 * @brief A level or ratio expressed in decibels.
 *
 * Only used at I/O boundaries; the calculus itself runs in the linear domain.
 */
struct Decibel {
    double value = 0.0;
};

/**
 * @brief Dimensionless linear power ratio, strictly positive.
 */
class LinearRatio {
public:
    explicit LinearRatio(double value);
    static LinearRatio from_db(Decibel db) { return LinearRatio(db_to_linear(db.value)); }

    double value() const { return value_; }
    Decibel to_db() const { return Decibel{linear_to_db(value_)}; }

private:
    double value_;
};

/**
 * @brief Non-negative power in watts.
 */
class Power {
public:
    Power() = default;
    explicit Power(double watts);
    static Power watts(double w) { return Power(w); }
    static Power from_dbm(double dbm) { return Power(dbm_to_watts(dbm)); }
    static Power from_dbw(double dbw) { return Power(db_to_linear(dbw)); }

    double w() const { return watts_; }
    double dbm() const { return watts_to_dbm(watts_); }
    double dbw() const { return linear_to_db(watts_); }

private:
    double watts_ = 0.0;
};

}  // namespace wastefactor
