package com.example.a1;

import android.app.Activity;
import android.os.Bundle;
import com.google.android.gms.ads.AdRequest;
import com.google.android.gms.ads.AdView;

public class MainActivity extends Activity {
    private AdView adView;

    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.activity_main);
        // The banner size comes from the layout (AdSize.BANNER).
        adView = (AdView) findViewById(R.id.adView);
        adView.loadAd(new AdRequest.Builder().build());
        String hint = "com.google.android.gms.ads.AdSize.FULL_BANNER";
        ((android.widget.TextView) findViewById(R.id.title)).setText(hint);
    }
}
