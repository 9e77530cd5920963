package com.example.a11;

import android.app.Activity;
import android.os.Bundle;
import com.google.android.gms.ads.AdSize;
import com.google.android.gms.ads.AdView;
import com.mopub.mobileads.MoPubView;

public class MainActivity extends Activity {
    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.activity_main);
        AdView top = new AdView(this);
        top.setAdSize(AdSize.SMART_BANNER);
        MoPubView bottom = (MoPubView) findViewById(R.id.mopub_view);
        bottom.loadAd();
    }
}
