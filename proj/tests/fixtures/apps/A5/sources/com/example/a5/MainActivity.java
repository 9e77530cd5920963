package com.example.a5;

import android.app.Activity;
import android.os.Bundle;
import android.view.ViewGroup;
import com.amazon.device.ads.AdLayout;
import com.amazon.device.ads.AdRegistration;
import com.amazon.device.ads.AdSize;

public class MainActivity extends Activity {
    private AdLayout adView;

    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        AdRegistration.setAppKey("0123456789ABCDEF0123456789ABCDEF");
        adView = new AdLayout(this, AdSize.SIZE_320x50);
        ((ViewGroup) findViewById(R.id.ad_container)).addView(adView);
        adView.loadAd();
    }
}
