//! The NOAA solar calculator spreadsheet, column by column, in plain `f64`.

/// Julian day at 0h UT of a Gregorian calendar date (Meeus, ch. 7).
pub fn julian_day(year: i32, month: u32, day: u32) -> f64 {
    let (y, m) = if month <= 2 { (year as f64 - 1.0, month as f64 + 12.0) } else { (year as f64, month as f64) };
    let a = (y / 100.0).floor();
    let b = 2.0 - a + (a / 4.0).floor();
    (365.25 * (y + 4716.0)).floor() + (30.6001 * (m + 1.0)).floor() + day as f64 + b - 1524.5
}

#[derive(Debug, Clone, Copy)]
pub struct NoaaSun {
    pub altitude: f64,
    pub azimuth: f64,
    pub declination: f64,
    pub equation_of_time: f64,
}

/// `local_minutes` past local midnight; `tz` in hours east of UTC.
pub fn sun(lat: f64, lon: f64, tz: f64, year: i32, month: u32, day: u32, local_minutes: f64) -> NoaaSun {
    let rad = f64::to_radians;
    let deg = f64::to_degrees;
    let jd = julian_day(year, month, day) + local_minutes / 1440.0 - tz / 24.0;
    let jc = (jd - 2451545.0) / 36525.0;

    let geom_mean_long = (280.46646 + jc * (36000.76983 + jc * 0.0003032)).rem_euclid(360.0);
    let geom_mean_anom = 357.52911 + jc * (35999.05029 - 0.0001537 * jc);
    let eccent = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc);
    let eq_ctr = rad(geom_mean_anom).sin() * (1.914602 - jc * (0.004817 + 0.000014 * jc))
        + rad(2.0 * geom_mean_anom).sin() * (0.019993 - 0.000101 * jc)
        + rad(3.0 * geom_mean_anom).sin() * 0.000289;
    let true_long = geom_mean_long + eq_ctr;
    let app_long = true_long - 0.00569 - 0.00478 * rad(125.04 - 1934.136 * jc).sin();
    let mean_obliq = 23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0) / 60.0;
    let obliq_corr = mean_obliq + 0.00256 * rad(125.04 - 1934.136 * jc).cos();
    let declin = deg((rad(obliq_corr).sin() * rad(app_long).sin()).asin());
    let var_y = rad(obliq_corr / 2.0).tan() * rad(obliq_corr / 2.0).tan();
    let eq_time = 4.0
        * deg(var_y * (2.0 * rad(geom_mean_long)).sin() - 2.0 * eccent * rad(geom_mean_anom).sin()
            + 4.0 * eccent * var_y * rad(geom_mean_anom).sin() * (2.0 * rad(geom_mean_long)).cos()
            - 0.5 * var_y * var_y * (4.0 * rad(geom_mean_long)).sin()
            - 1.25 * eccent * eccent * (2.0 * rad(geom_mean_anom)).sin());

    let true_solar_time = (local_minutes + eq_time + 4.0 * lon - 60.0 * tz).rem_euclid(1440.0);
    let hour_angle =
        if true_solar_time / 4.0 < 0.0 { true_solar_time / 4.0 + 180.0 } else { true_solar_time / 4.0 - 180.0 };
    let zenith = deg((rad(lat).sin() * rad(declin).sin() + rad(lat).cos() * rad(declin).cos() * rad(hour_angle).cos())
        .clamp(-1.0, 1.0)
        .acos());
    let elevation = 90.0 - zenith;

    let refraction = if elevation > 85.0 || elevation <= -1.0 {
        0.0
    } else if elevation > 5.0 {
        let t = rad(elevation).tan();
        58.1 / t - 0.07 / t.powi(3) + 0.000086 / t.powi(5)
    } else if elevation > -0.575 {
        1735.0 + elevation * (-518.2 + elevation * (103.4 + elevation * (-12.79 + elevation * 0.711)))
    } else {
        -20.772 / rad(elevation).tan()
    } / 3600.0;

    let cos_az = ((rad(lat).sin() * rad(zenith).cos()) - rad(declin).sin()) / (rad(lat).cos() * rad(zenith).sin());
    let a = deg(cos_az.clamp(-1.0, 1.0).acos());
    let azimuth = if hour_angle > 0.0 { (a + 180.0).rem_euclid(360.0) } else { (540.0 - a).rem_euclid(360.0) };

    NoaaSun { altitude: elevation + refraction, azimuth, declination: declin, equation_of_time: eq_time }
}

/// Smallest absolute difference between two angles in degrees.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}
