#include "decnas/data.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>

#include "decnas/util.hpp"
#include "image_io.hpp"

namespace fs = std::filesystem;

namespace decnas {

namespace {

// Largest-remainder apportionment of n into the given ratios, each part >= 1.
std::vector<int> apportion(int n, const std::vector<double>& ratios) {
  const int parts = static_cast<int>(ratios.size());
  std::vector<int> sizes(parts);
  std::vector<std::pair<double, int>> rema(parts);
  int assigned = 0;
  for (int i = 0; i < parts; ++i) {
    double exact = n * ratios[i];
    sizes[i] = static_cast<int>(exact);
    rema[i] = {exact - sizes[i], i};
    assigned += sizes[i];
  }
  std::stable_sort(rema.begin(), rema.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int i = 0; assigned < n; ++i, ++assigned) sizes[rema[i % parts].second]++;
  for (int i = 0; i < parts; ++i) {
    while (sizes[i] < 1) {
      auto big = std::max_element(sizes.begin(), sizes.end());
      --(*big);
      ++sizes[i];
    }
  }
  return sizes;
}

}  // namespace

std::vector<Sample> load_synthetic(std::uint64_t seed, int class_count,
                                   int sample_count, Shape3 shape, float noise) {
  if (class_count < 2) throw DataError("class_count must be >= 2");
  if (sample_count < class_count)
    throw DataError("need at least one sample per class");

  // fixed per-class blob pattern
  auto proto_rng = make_rng(seed_combine(seed, 0xb10bULL));
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  std::vector<std::vector<std::array<float, 4>>> blobs(class_count);
  for (int c = 0; c < class_count; ++c) {
    int nblobs = 2 + static_cast<int>(proto_rng() % 3);
    for (int b = 0; b < nblobs; ++b) {
      // (cy, cx, sigma, amplitude)
      blobs[c].push_back({unit(proto_rng) * shape.h, unit(proto_rng) * shape.w,
                          0.08f * shape.h + unit(proto_rng) * 0.22f * shape.h,
                          0.5f + unit(proto_rng)});
    }
  }

  auto rng = make_rng(seed_combine(seed, 0x5a3cULL));
  std::normal_distribution<float> jitter(0.0f, 1.0f);
  std::vector<Sample> out;
  out.reserve(sample_count);
  for (int s = 0; s < sample_count; ++s) {
    int label = s % class_count;  // every class represented
    Sample sm;
    sm.label = label;
    sm.features = Tensor({static_cast<std::size_t>(shape.h),
                          static_cast<std::size_t>(shape.w),
                          static_cast<std::size_t>(shape.c)});
    // per-sample blob displacement
    float dy = jitter(rng) * 0.06f * shape.h;
    float dx = jitter(rng) * 0.06f * shape.w;
    for (int y = 0; y < shape.h; ++y)
      for (int x = 0; x < shape.w; ++x) {
        float v = 0.0f;
        for (const auto& b : blobs[label]) {
          float ddy = (y - b[0] - dy) / b[2];
          float ddx = (x - b[1] - dx) / b[2];
          v += b[3] * std::exp(-0.5f * (ddy * ddy + ddx * ddx));
        }
        for (int ch = 0; ch < shape.c; ++ch) {
          float px = v + noise * jitter(rng);
          sm.features.values[(static_cast<std::size_t>(y) * shape.w + x) * shape.c + ch] = px;
        }
      }
    out.push_back(std::move(sm));
  }
  return out;
}

namespace {

using image_io::RawImage;

Sample image_to_sample(const RawImage& img, Shape3 shape, int label) {
  Sample sm;
  sm.label = label;
  sm.features = Tensor({static_cast<std::size_t>(shape.h),
                        static_cast<std::size_t>(shape.w),
                        static_cast<std::size_t>(shape.c)});
  for (int y = 0; y < shape.h; ++y)
    for (int x = 0; x < shape.w; ++x) {
      int sy = y * img.h / shape.h;
      int sx = x * img.w / shape.w;
      const std::uint8_t* px =
          img.pixels.data() + (std::size_t(sy) * img.w + sx) * img.channels;
      for (int c = 0; c < shape.c; ++c) {
        float v;
        if (img.channels >= shape.c) {
          v = px[c] / 255.0f;
        } else {
          v = px[0] / 255.0f;  // replicate gray into RGB
        }
        if (shape.c == 1 && img.channels == 3)
          v = (px[0] + px[1] + px[2]) / (3.0f * 255.0f);
        sm.features.values[(std::size_t(y) * shape.w + x) * shape.c + c] = v;
      }
    }
  return sm;
}

}  // namespace

std::vector<Sample> load_image_directory(const std::string& path, Shape3 shape) {
  if (!fs::is_directory(path)) throw DataError("not a directory: " + path);
  std::vector<std::string> class_dirs;
  for (const auto& e : fs::directory_iterator(path))
    if (e.is_directory()) class_dirs.push_back(e.path().filename().string());
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.empty()) throw DataError("no class subdirectories in " + path);

  std::vector<Sample> out;
  for (std::size_t label = 0; label < class_dirs.size(); ++label) {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(fs::path(path) / class_dirs[label]))
      if (e.is_regular_file()) files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    std::size_t before = out.size();
    for (const auto& f : files) {
      std::string ext = fs::path(f).extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
      if (ext == ".pgm") {
        out.push_back(
            image_to_sample(image_io::read_pgm(f), shape, static_cast<int>(label)));
      } else if (ext == ".png") {
        out.push_back(
            image_to_sample(image_io::read_png(f), shape, static_cast<int>(label)));
      }
    }
    if (out.size() == before)
      throw DataError("class '" + class_dirs[label] + "' has no readable samples");
  }
  return out;
}

void split_client(std::vector<Sample> samples, std::uint64_t seed,
                  std::vector<Sample>& train, std::vector<Sample>& validation,
                  std::vector<Sample>& test) {
  const int n = static_cast<int>(samples.size());
  if (n < 5) throw DataError("split_client requires >= 5 samples");
  auto rng = make_rng(seed);
  std::shuffle(samples.begin(), samples.end(), rng);

  std::vector<int> sizes = apportion(n, {0.6, 0.2, 0.2});

  // stratified-where-possible: deal label-sorted samples into the part with
  // the largest remaining relative capacity
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& a, const Sample& b) { return a.label < b.label; });
  std::vector<std::vector<Sample>*> parts = {&train, &validation, &test};
  std::vector<int> remaining = sizes;
  for (auto* p : parts) p->clear();
  for (auto& sm : samples) {
    int best = -1;
    double best_ratio = -1.0;
    for (int i = 0; i < 3; ++i) {
      if (remaining[i] == 0) continue;
      double ratio = double(remaining[i]) / double(sizes[i]);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = i;
      }
    }
    parts[best]->push_back(std::move(sm));
    --remaining[best];
  }
}

DistributionVector distribution_vector(const ClientDataset& client,
                                       int class_count) {
  DistributionVector v(class_count, 0.0);
  int total = 0;
  auto count = [&](const std::vector<Sample>& part) {
    for (const auto& s : part) {
      v[s.label] += 1.0;
      ++total;
    }
  };
  count(client.train);
  count(client.validation);
  count(client.test);
  if (total == 0) throw DataError("client has no samples");
  for (auto& x : v) x /= total;
  return v;
}

namespace {

ClientDataset finish_client(int id, std::vector<Sample> shard,
                            int class_count, std::uint64_t seed) {
  ClientDataset c;
  c.client_id = id;
  split_client(std::move(shard), seed_combine(seed, 0x5b117ULL, std::uint64_t(id)),
               c.train, c.validation, c.test);
  c.distribution = distribution_vector(c, class_count);
  return c;
}

}  // namespace

Federation shard_clients(const std::vector<Sample>& samples, int num_clients,
                         ShardMode mode, int class_count, std::uint64_t seed) {
  if (num_clients < 1) throw DataError("num_clients must be >= 1");
  if (static_cast<int>(samples.size()) < 5 * num_clients)
    throw DataError("insufficient samples: need >= 5 per client");

  std::vector<std::vector<Sample>> shards(num_clients);
  auto rng = make_rng(seed_combine(seed, 0x5a4dULL));

  if (mode.iid) {
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    // sizes differ by at most one
    for (std::size_t i = 0; i < order.size(); ++i)
      shards[i % num_clients].push_back(samples[order[i]]);
  } else {
    const int k = mode.classes_per_client;
    if (k < 1 || k > class_count)
      throw DataError("classes_per_client must be in [1, class_count]");
    std::vector<int> perm(class_count);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    // client i draws from classes perm[(i*k + j) mod m], j = 0..k-1
    std::vector<std::vector<int>> claimants(class_count);
    for (int i = 0; i < num_clients; ++i)
      for (int j = 0; j < k; ++j)
        claimants[perm[(std::size_t(i) * k + j) % class_count]].push_back(i);

    // log-normal relative appetite per client
    std::lognormal_distribution<double> ln(0.0, 0.6);
    std::vector<double> appetite(num_clients);
    for (auto& a : appetite) a = ln(rng);

    std::vector<std::vector<std::size_t>> by_class(class_count);
    for (std::size_t i = 0; i < samples.size(); ++i)
      by_class[samples[i].label].push_back(i);
    for (auto& idxs : by_class) std::shuffle(idxs.begin(), idxs.end(), rng);

    for (int c = 0; c < class_count; ++c) {
      const auto& who = claimants[c];
      const auto& pool = by_class[c];
      if (who.empty()) {
        if (!pool.empty())
          throw DataError("class " + std::to_string(c) + " has no claiming client");
        continue;
      }
      // one sample minimum per claimant, rest by appetite
      std::vector<double> w(who.size());
      double wsum = 0.0;
      for (std::size_t i = 0; i < who.size(); ++i) wsum += (w[i] = appetite[who[i]]);
      std::vector<int> counts(who.size(), 0);
      int n = static_cast<int>(pool.size());
      int base = std::min<int>(n, static_cast<int>(who.size()));
      for (int i = 0; i < base; ++i) counts[i] = 1;
      int left = n - base;
      std::vector<std::pair<double, std::size_t>> frac(who.size());
      int given = 0;
      for (std::size_t i = 0; i < who.size(); ++i) {
        double exact = left * w[i] / wsum;
        int g = static_cast<int>(exact);
        counts[i] += g;
        given += g;
        frac[i] = {exact - g, i};
      }
      std::stable_sort(frac.begin(), frac.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t i = 0; given < left; ++given, ++i)
        counts[frac[i % frac.size()].second]++;
      std::size_t cursor = 0;
      for (std::size_t i = 0; i < who.size(); ++i)
        for (int j = 0; j < counts[i]; ++j)
          shards[who[i]].push_back(samples[pool[cursor++]]);
    }
  }

  Federation fed;
  fed.class_count = class_count;
  for (int i = 0; i < num_clients; ++i) {
    if (static_cast<int>(shards[i].size()) < 5) {
      std::cerr << "warning: client " << i << " has " << shards[i].size()
                << " samples (< 5), excluded\n";
      continue;
    }
    fed.clients.push_back(
        finish_client(i, std::move(shards[i]), class_count, seed));
  }
  if (fed.clients.empty()) throw DataError("all clients excluded");
  return fed;
}

}  // namespace decnas
