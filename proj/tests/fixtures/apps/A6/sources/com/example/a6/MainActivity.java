package com.example.a6;

import android.app.Activity;
import android.os.Bundle;
import com.mopub.mobileads.MoPubInterstitial;
import com.mopub.mobileads.MoPubView;

public class MainActivity extends Activity {
    private MoPubView banner;
    private MoPubInterstitial interstitial;

    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.activity_main);
        banner = (MoPubView)
                findViewById(R.id.mopub_banner);
        banner.setAdUnitId("b195f8dd8ded45fe847ad89ed1d016da");
        banner.loadAd();
        interstitial = new MoPubInterstitial(this, "24534e1901884e398f1253216226017e");
        interstitial.load();
    }
}
