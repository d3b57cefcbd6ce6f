#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vpa/errors.hpp"
#include "vpa/features.hpp"

using namespace vpa;

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)

PoiDatabase tiny_db() {
  return PoiDatabase({{"cafe1", "Cafe", "cafe", 139.70, 35.68},
                      {"shop1", "Shop", "shop", 139.71, 35.68},
                      {"home1", "Home", "home", 139.72, 35.68, PoiSource::personal},
                      {"gym1", "Gym", "gym", 139.73, 35.68}});
}

Session dummy_session(const std::string& id) {
  return Session{id, {{139.70, 35.68, 0}}};
}

StayPoint sp_with(std::int64_t bt, std::int64_t st, GeoPoint at = {139.70, 35.68}) {
  StayPoint sp;
  sp.bt = bt;
  sp.et = bt + st;
  sp.st = st;
  sp.lng = at.lng;
  sp.lat = at.lat;
  return sp;
}

}  // namespace

TEST_CASE("single visit of e minutes gives nu=1, tau=0") {
  const auto db = tiny_db();
  // 163 s is e minutes to within rounding of the integer timestamps.
  const std::vector<AnnotatedSession> data = {
      {dummy_session("s1"), {{1000, 1163, "cafe1"}}}};
  const FeatureBank bank = train_feature_bank(data, db, {});
  REQUIRE(bank.lognorm.count("cafe"));
  CHECK(std::abs(bank.lognorm.at("cafe").nu - 1.0) < 2e-3);
  CHECK(bank.lognorm.at("cafe").tau == 0.0);
}

TEST_CASE("log-normal fit matches the closed-form MLE") {
  const auto db = tiny_db();
  // 10 and 40 minutes in one category.
  const std::vector<AnnotatedSession> data = {
      {dummy_session("s1"), {{0, 600, "cafe1"}, {1000, 3400, "cafe1"}}}};
  const FeatureBank bank = train_feature_bank(data, db, {});
  const double nu = (std::log(10.0) + std::log(40.0)) / 2.0;
  const double dev = std::log(10.0) - nu;
  CHECK(bank.lognorm.at("cafe").nu == doctest::Approx(nu).epsilon(1e-12));
  CHECK(bank.lognorm.at("cafe").tau == doctest::Approx(dev * dev).epsilon(1e-12));
}

TEST_CASE("visits-per-session statistics are the MLE mean and biased variance") {
  const auto db = tiny_db();
  std::vector<VisitRecord> three = {{0, 600, "cafe1"},
                                    {700, 1300, "shop1"},
                                    {1400, 2000, "gym1"}};
  std::vector<VisitRecord> five = {{0, 600, "cafe1"},
                                   {700, 1300, "shop1"},
                                   {1400, 2000, "gym1"},
                                   {2100, 2700, "cafe1"},
                                   {2800, 3400, "home1"}};
  const std::vector<AnnotatedSession> data = {{dummy_session("s1"), three},
                                              {dummy_session("s2"), five}};
  const FeatureBank bank = train_feature_bank(data, db, {});
  CHECK(bank.mu_y == doctest::Approx(4.0));
  CHECK(bank.sigma2_y == doctest::Approx(1.0));
}

TEST_CASE("training on nothing fails") {
  CHECK_THROWS_AS(train_feature_bank({}, tiny_db(), {}), EmptyTrainingError);
}

TEST_CASE("training rejects unknown POI references") {
  const std::vector<AnnotatedSession> data = {
      {dummy_session("s1"), {{0, 600, "nope"}}}};
  CHECK_THROWS_AS(train_feature_bank(data, tiny_db(), {}), InvalidConfigError);
}

TEST_CASE("stay-point feature at a stored center is exactly one") {
  FeatureBank bank;
  bank.sig_centers = {{139.70, 35.68}};
  const auto f = stay_point_features(bank, {}, sp_with(0, 600));
  CHECK(f.x_s[0] == 1.0);
  CHECK(f.x_sbar[0] == 0.0);
}

TEST_CASE("thirty-minute stay at lambda 1/30 gives 1 - 1/e") {
  FeatureBank bank;
  const auto f = stay_point_features(bank, {}, sp_with(0, 1800));
  CHECK(std::abs(f.x_s[1] - 0.6321205588285577) < 1e-6);
}

TEST_CASE("zero stay time zeroes the duration feature") {
  FeatureBank bank;
  const auto f = stay_point_features(bank, {}, sp_with(0, 0));
  CHECK(f.x_s[1] == 0.0);
  CHECK(f.x_sbar[1] == 1.0);
  CHECK(f.x_s[0] == 0.0);  // no trained centers: distance treated as infinite
}

TEST_CASE("x_s and x_sbar always sum to one componentwise") {
  FeatureBank bank;
  bank.sig_centers = {{139.70, 35.68}, {139.75, 35.70}};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> off(-0.05, 0.05);
  std::uniform_int_distribution<std::int64_t> st(0, 7200);
  for (int i = 0; i < 200; ++i) {
    const auto sp = sp_with(0, st(rng), {139.70 + off(rng), 35.68 + off(rng)});
    const auto f = stay_point_features(bank, {}, sp);
    CHECK(f.x_s[0] + f.x_sbar[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.x_s[1] + f.x_sbar[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.x_s[0] >= 0.0);
    CHECK(f.x_s[0] <= 1.0);
    CHECK(f.x_s[1] >= 0.0);
    CHECK(f.x_s[1] <= 1.0);
  }
}

TEST_CASE("duration feature is monotone in stay time") {
  FeatureBank bank;
  double prev = -1.0;
  for (std::int64_t st = 0; st <= 7200; st += 60) {
    const auto f = stay_point_features(bank, {}, sp_with(0, st));
    CHECK(f.x_s[1] >= prev);
    prev = f.x_s[1];
  }
}

TEST_CASE("proximity feature is monotone in distance to the nearest center") {
  FeatureBank bank;
  bank.sig_centers = {{139.70, 35.68}};
  double prev = 2.0;
  for (int step = 0; step < 30; ++step) {
    const auto sp = sp_with(0, 600, {139.70 + step * 1e-5, 35.68});
    const auto f = stay_point_features(bank, {}, sp);
    CHECK(f.x_s[0] <= prev);
    prev = f.x_s[0];
  }
}

TEST_CASE("unseen POI and category give zero interpolated frequencies") {
  FeatureBank bank;
  bank.n_categories = 4;
  const Poi poi{"new1", "New", "newcat", 139.70, 35.68};
  const auto xv = stay_poi_features(bank, {}, sp_with(0, 600), poi);
  CHECK(xv[0] == 0.0);
  CHECK(xv[1] == 0.0);
  CHECK(xv[2] == 0.0);  // unseen category has no stay-time distribution
}

TEST_CASE("frequency interpolation arithmetic") {
  FeatureBank bank;
  bank.f_poi["cafe1"] = 0.5;
  bank.f_poi_time[0]["cafe1"] = 1.0;
  const Poi poi{"cafe1", "Cafe", "cafe", 139.70, 35.68};
  const auto xv = stay_poi_features(bank, {}, sp_with(0, 600), poi);  // window 0
  CHECK(xv[0] == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("log-normal density at the unit point") {
  FeatureBank bank;
  bank.lognorm["cafe"] = {0.0, 1.0};
  const Poi poi{"cafe1", "Cafe", "cafe", 139.70, 35.68};
  const auto xv = stay_poi_features(bank, {}, sp_with(0, 60), poi);  // 1 minute
  CHECK(std::abs(xv[2] - kInvSqrt2Pi) < 1e-6);
}

TEST_CASE("degenerate fitted variance is floored at evaluation") {
  FeatureBank bank;
  bank.lognorm["cafe"] = {0.0, 0.0};
  const Poi poi{"cafe1", "Cafe", "cafe", 139.70, 35.68};
  const auto xv = stay_poi_features(bank, {}, sp_with(0, 60), poi);
  // Density of LN(0, 0.25) at 1: 1/sqrt(2*pi*0.25).
  CHECK(std::abs(xv[2] - 0.7978845608028654) < 1e-9);
}

TEST_CASE("log_normal_density closed forms") {
  CHECK(std::abs(log_normal_density(1.0, 0.0, 1.0) - kInvSqrt2Pi) < 1e-12);
  CHECK(log_normal_density(0.0, 0.0, 1.0) == 0.0);
  CHECK(log_normal_density(-3.0, 0.0, 1.0) == 0.0);
  CHECK(log_normal_density(5.0, 0.0, 0.0) == 0.0);
  // x = e^nu maximizes the numerator term exp(-(ln x - nu)^2 / 2tau).
  const double at_mode = log_normal_density(std::exp(2.0), 2.0, 0.5);
  CHECK(std::abs(at_mode - kInvSqrt2Pi / (std::exp(2.0) * std::sqrt(0.5))) < 1e-12);
}

TEST_CASE("transition probability with no data reduces to the smoothing prior") {
  FeatureBank bank;
  bank.n_categories = 10;
  const Poi k{"a", "A", "ca", 0, 0};
  const Poi l{"b", "B", "cb", 0, 0};
  const auto xt = poi_pair_features(bank, {}, k, l);
  CHECK(xt[0] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("never-followed category pair under heavy smoothing denominators") {
  FeatureBank bank;
  bank.n_categories = 100;
  bank.trans_out["ca"] = 99;
  bank.trans["ca"]["other"] = 99;
  const Poi k{"a", "A", "ca", 0, 0};
  const Poi l{"b", "B", "cb", 0, 0};
  const auto xt = poi_pair_features(bank, {}, k, l);
  CHECK(xt[0] == doctest::Approx(0.0001).epsilon(1e-12));
}

TEST_CASE("categories co-occurring in every session score one half") {
  FeatureBank bank;
  bank.n_categories = 5;
  for (int s = 0; s < 7; ++s) bank.session_cats.push_back({"ca", "cb"});
  const Poi k{"a", "A", "ca", 0, 0};
  const Poi l{"b", "B", "cb", 0, 0};
  const auto xt = poi_pair_features(bank, {}, k, l);
  CHECK(xt[1] == doctest::Approx(0.5).epsilon(1e-12));

  FeatureParams union_form;
  union_form.jaccard_union_denominator = true;
  CHECK(poi_pair_features(bank, union_form, k, l)[1] ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empty session statistics give a zero Jaccard") {
  FeatureBank bank;
  bank.n_categories = 5;
  const Poi k{"a", "A", "ca", 0, 0};
  const Poi l{"b", "B", "cb", 0, 0};
  CHECK(poi_pair_features(bank, {}, k, l)[1] == 0.0);
}

TEST_CASE("smoothed transition distribution sums to one per source category") {
  const auto db = tiny_db();
  const std::vector<AnnotatedSession> data = {
      {dummy_session("s1"),
       {{0, 600, "home1"}, {700, 1300, "cafe1"}, {1400, 2000, "shop1"}}},
      {dummy_session("s2"), {{0, 600, "home1"}, {700, 1300, "shop1"}}},
      {dummy_session("s3"), {{0, 600, "cafe1"}}}};
  const FeatureParams params;
  const FeatureBank bank = train_feature_bank(data, db, params);

  const std::vector<std::string> cats = {"cafe", "shop", "home", "gym"};
  REQUIRE(bank.n_categories == cats.size());
  for (const std::string& from : cats) {
    double total = 0.0;
    const Poi k{"x", "X", from, 0, 0};
    for (const std::string& to : cats) {
      const Poi l{"y", "Y", to, 0, 0};
      total += poi_pair_features(bank, params, k, l)[0];
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("frequency tables sum to one in every non-empty scope") {
  const auto db = tiny_db();
  const std::vector<AnnotatedSession> data = {
      {dummy_session("s1"),
       {{3600, 4200, "home1"}, {30000, 32000, "cafe1"}, {70000, 71000, "shop1"}}},
      {dummy_session("s2"), {{50000, 52000, "gym1"}, {80000, 81000, "home1"}}}};
  const FeatureBank bank = train_feature_bank(data, db, {});

  auto check_table = [](const std::map<std::string, double>& t) {
    if (t.empty()) return;
    double sum = 0.0;
    for (const auto& [k, v] : t) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  };
  check_table(bank.f_poi);
  check_table(bank.f_cat);
  for (int w = 0; w < 4; ++w) {
    check_table(bank.f_poi_time[w]);
    check_table(bank.f_cat_time[w]);
  }
}

TEST_CASE("length feature closed forms") {
  FeatureBank bank;
  bank.mu_y = 4.0;
  bank.sigma2_y = 1.0;
  CHECK(std::abs(length_feature(bank, 4) - kInvSqrt2Pi) < 1e-6);
  bank.sigma2_y = 0.0;
  CHECK(length_feature(bank, 4) == 1.0);
  CHECK(length_feature(bank, 5) == 0.0);
}

TEST_CASE("gaussian density closed form") {
  CHECK(std::abs(gaussian_density(4.0, 4.0, 1.0) - kInvSqrt2Pi) < 1e-12);
  CHECK(std::abs(gaussian_density(5.0, 4.0, 1.0) -
                 kInvSqrt2Pi * std::exp(-0.5)) < 1e-12);
  CHECK(gaussian_density(1.0, 0.0, 0.0) == 0.0);
}

TEST_CASE("candidate lists are distance-sorted and truncated") {
  constexpr double kMeterPerDeg = kEarthRadiusMeters * 3.14159265358979323846 / 180.0;
  std::vector<Poi> pois;
  for (int i = 0; i < 60; ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "p%02d", i);
    pois.push_back({id, "P", "c", 0.0, (i + 1) * 5.0 / kMeterPerDeg});
  }
  const PoiDatabase db(pois);
  FeatureParams params;  // radius 500, cap 50

  const auto sp = sp_with(0, 600, {0.0, 0.0});
  const auto all = candidate_pois(db, sp, params);
  CHECK(all.size() == 50);  // 60 within 300 m, truncated to the cap
  for (std::size_t i = 1; i < all.size(); ++i) {
    CHECK(geo_distance(sp.center(), all[i - 1]->center()) <=
          geo_distance(sp.center(), all[i]->center()));
  }

  params.max_candidates = 3;
  CHECK(candidate_pois(db, sp, params).size() == 3);

  params.max_candidates = 50;
  params.candidate_radius = 12.0;
  CHECK(candidate_pois(db, sp, params).size() == 2);  // 5 m and 10 m

  const auto far = sp_with(0, 600, {10.0, 10.0});
  params.candidate_radius = 500.0;
  CHECK(candidate_pois(db, far, params).empty());
}

TEST_CASE("log-normal MLE round trip on sampled stay times") {
  const double true_nu = 1.2;
  const double true_tau = 0.49;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> log_minutes(true_nu, std::sqrt(true_tau));

  PoiDatabase db({{"cafe1", "Cafe", "cafe", 139.70, 35.68}});
  std::vector<AnnotatedSession> data;
  const int n_sessions = 1000;
  const int per_session = 10;
  for (int s = 0; s < n_sessions; ++s) {
    std::vector<VisitRecord> visits;
    std::int64_t t = 0;
    for (int v = 0; v < per_session; ++v) {
      const double minutes = std::exp(log_minutes(rng));
      const auto dur =
          std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(minutes * 60.0)));
      visits.push_back({t, t + dur, "cafe1"});
      t += dur + 10;
    }
    data.push_back({dummy_session("s" + std::to_string(s)), std::move(visits)});
  }
  const FeatureBank bank = train_feature_bank(data, db, {});
  CHECK(std::abs(bank.lognorm.at("cafe").nu - true_nu) < 0.05);
  CHECK(std::abs(bank.lognorm.at("cafe").tau - true_tau) < 0.1);
}
